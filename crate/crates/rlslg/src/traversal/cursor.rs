use super::node::{NodeCursor, Tree};
use crate::access::{AccessIndex, LeafyIndex, Route};
use crate::error::{Error, Result};
use crate::grammar::Sym;
use crate::succinct::PackedString;

/// A pointer to one character of the text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharCursor {
    node: NodeCursor,
    pos: u64,
}

impl CharCursor {
    /// Unweighted position.
    pub fn pos(&self) -> u64 {
        self.pos
    }

    /// Weight of the text before the character.
    pub fn offset(&self) -> u64 {
        self.node.offset()
    }

    /// The terminal under the cursor.
    pub fn symbol(&self) -> Sym {
        self.node.sym()
    }

    pub fn node(&self) -> &NodeCursor {
        &self.node
    }
}

impl Tree<'_> {
    /// Number of characters of the text.
    pub fn text_len(&self) -> u64 {
        self.top().count_of(self.top().grammar().start)
    }

    /// Cursor at the character covering weighted position `i`.
    pub fn char_new(&self, i: u64) -> Result<CharCursor> {
        let total = self.top().total_weight();
        if i >= total {
            return Err(Error::IndexOutOfRange { index: i, weight: total });
        }
        let mut p = self.root();
        let mut pos = 0u64;
        while !self.is_leaf(&p) {
            let (c, hit) = self.push_child_hit(&p, i)?;
            let ci = self.top().node(p.sym());
            pos += if ci.counts.is_empty() {
                hit.offset - p.offset()
            } else {
                ci.counts[hit.run] + hit.copy * self.top().count_of(hit.sym)
            };
            p = c;
        }
        Ok(CharCursor { node: p, pos })
    }

    /// Cursor at unweighted position `j`.
    pub fn char_at(&self, j: u64) -> Result<CharCursor> {
        let n = self.text_len();
        if j >= n {
            return Err(Error::OutOfBounds { index: j, len: n });
        }
        let mut p = self.root();
        let mut base = 0u64;
        while !self.is_leaf(&p) {
            let ci = self.top().node(p.sym());
            let i = if ci.counts.is_empty() {
                j
            } else {
                // locate the run by counts, then the copy inside it
                let y = j - base;
                let run = ci.counts.partition_point(|&c| c <= y) - 1;
                let r = ci.runs[run];
                let per = self.top().count_of(r.sym);
                let copy = (y - ci.counts[run]) / per;
                base += ci.counts[run] + copy * per;
                p.offset() + ci.pref[run] + copy * self.top().weight_of(r.sym)
            };
            p = self.push_child(&p, i)?;
        }
        Ok(CharCursor { node: p, pos: j })
    }

    /// The next character, cyclically.
    pub fn forward(&self, c: &CharCursor) -> Result<CharCursor> {
        let up = self.pop_right(&c.node);
        let sib = self.right_sibling(&up)?;
        let node = self.push_left(&sib);
        let n = self.text_len();
        Ok(CharCursor { node, pos: (c.pos + 1) % n })
    }

    /// The previous character, cyclically.
    pub fn backward(&self, c: &CharCursor) -> Result<CharCursor> {
        let up = self.pop_left(&c.node);
        let sib = self.left_sibling(&up)?;
        let node = self.push_right(&sib);
        let n = self.text_len();
        Ok(CharCursor { node, pos: (c.pos + n - 1) % n })
    }
}

/// A character cursor over the top string of a leafy index plus a position
/// inside the current leaf block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FastCursor {
    q: CharCursor,
    leaf_pos: usize,
}

impl FastCursor {
    pub fn pos(&self) -> u64 {
        self.q.offset() + self.leaf_pos as u64
    }

    pub fn leaf_pos(&self) -> usize {
        self.leaf_pos
    }

    pub fn leaf(&self) -> Sym {
        self.q.symbol()
    }
}

/// Cursors and extraction over an index.
#[derive(Debug, Clone)]
pub struct Traversal<'a> {
    ix: &'a AccessIndex,
    tree: Tree<'a>,
    fast: Option<(Tree<'a>, &'a LeafyIndex)>,
}

impl<'a> Traversal<'a> {
    pub fn new(ix: &'a AccessIndex) -> Result<Traversal<'a>> {
        let tree = Tree::new(ix.weighted())?;
        let fast = match ix.leafy() {
            Some(l) if !l.is_unrolled() => Some((Tree::new(l.top())?, l)),
            _ => None,
        };
        Ok(Traversal { ix, tree, fast })
    }

    /// Node and character cursors over the weighted index.
    pub fn tree(&self) -> &Tree<'a> {
        &self.tree
    }

    pub fn has_fast(&self) -> bool {
        self.fast.is_some()
    }

    fn fast_parts(&self) -> Result<&(Tree<'a>, &'a LeafyIndex)> {
        self.fast.as_ref().ok_or(Error::NotLeafyIndex)
    }

    /// Block size of the fast cursors.
    pub fn block(&self) -> Result<usize> {
        Ok(self.fast_parts()?.1.b())
    }

    /// Fast cursor at position `i`.
    pub fn fast_new(&self, i: u64) -> Result<FastCursor> {
        let (tree, _) = self.fast_parts()?;
        let q = tree.char_new(i)?;
        let leaf_pos = (i - q.offset()) as usize;
        Ok(FastCursor { q, leaf_pos })
    }

    /// Reads the next `m` characters cyclically. Returns the moved cursor,
    /// the characters and the number of steps on the top string.
    pub fn fast_forward(&self, p: &FastCursor, m: usize) -> Result<(FastCursor, PackedString, usize)> {
        let (tree, lf) = self.fast_parts()?;
        let leaves = lf.leaves();
        let mut q = p.q.clone();
        let rhs = &leaves[q.symbol() as usize];
        if p.leaf_pos + m < rhs.len() {
            let block = rhs.slice(p.leaf_pos, p.leaf_pos + m)?;
            return Ok((FastCursor { q, leaf_pos: p.leaf_pos + m }, block, 0));
        }
        let mut r = rhs.slice(p.leaf_pos, rhs.len())?;
        q = tree.forward(&q)?;
        let mut steps = 1;
        loop {
            let rhs = &leaves[q.symbol() as usize];
            if r.len() + rhs.len() > m {
                break;
            }
            r.append(rhs);
            q = tree.forward(&q)?;
            steps += 1;
        }
        let rhs = &leaves[q.symbol() as usize];
        let leaf_pos = m - r.len();
        r.append_range(rhs, 0, leaf_pos);
        Ok((FastCursor { q, leaf_pos }, r, steps))
    }

    /// Reads the `m` characters before the cursor cyclically.
    pub fn fast_backward(&self, p: &FastCursor, m: usize) -> Result<(FastCursor, PackedString, usize)> {
        let (tree, lf) = self.fast_parts()?;
        let leaves = lf.leaves();
        let mut q = p.q.clone();
        if p.leaf_pos >= m {
            let block = leaves[q.symbol() as usize].slice(p.leaf_pos - m, p.leaf_pos)?;
            return Ok((FastCursor { q, leaf_pos: p.leaf_pos - m }, block, 0));
        }
        // pieces are collected right to left and joined at the end
        let mut parts: Vec<(Sym, usize, usize)> = vec![(q.symbol(), 0, p.leaf_pos)];
        let mut have = p.leaf_pos;
        q = tree.backward(&q)?;
        let mut steps = 1;
        loop {
            let len = leaves[q.symbol() as usize].len();
            if have + len >= m {
                break;
            }
            parts.push((q.symbol(), 0, len));
            have += len;
            q = tree.backward(&q)?;
            steps += 1;
        }
        let len = leaves[q.symbol() as usize].len();
        let leaf_pos = len - (m - have);
        parts.push((q.symbol(), leaf_pos, len));
        let mut r = PackedString::new(leaves[0].width());
        for &(s, lo, hi) in parts.iter().rev() {
            r.append_range(&leaves[s as usize], lo, hi);
        }
        Ok((FastCursor { q, leaf_pos }, r, steps))
    }

    /// Characters `[i, i + m)` of the text.
    pub fn extract(&self, i: u64, m: u64) -> Result<Vec<Sym>> {
        let n = self.ix.len();
        if i.checked_add(m).is_none_or(|e| e > n) {
            return Err(Error::RangeOutOfBounds { start: i, end: i.saturating_add(m), len: n });
        }
        if m == 0 {
            return Ok(Vec::new());
        }
        if self.ix.route() == Route::Explicit {
            let t = self.ix.explicit().expect("explicit route has a packed text").text();
            return Ok(t.slice(i as usize, (i + m) as usize)?.to_vec());
        }
        if self.fast.is_some() {
            let p = self.fast_new(i)?;
            let (_, block, _) = self.fast_forward(&p, m as usize)?;
            return Ok(block.to_vec());
        }
        let mut c = self.tree.char_at(i)?;
        let mut out = Vec::with_capacity(m as usize);
        out.push(c.symbol());
        for _ in 1..m {
            c = self.tree.forward(&c)?;
            out.push(c.symbol());
        }
        Ok(out)
    }
}

/// Characters `[i, i + m)` of the indexed text.
pub fn extract(ix: &AccessIndex, i: u64, m: u64) -> Result<Vec<Sym>> {
    Traversal::new(ix)?.extract(i, m)
}

/// Block size `ceil(min(w, tau log n) / log sigma)` that keeps a block within
/// a few machine words of `w` bits.
pub fn traversal_block_size(n: u64, sigma: usize, tau: f64, w: u32) -> usize {
    let ln = (n.max(2) as f64).log2();
    let ls = (sigma.max(2) as f64).log2();
    ((w as f64).min(tau * ln) / ls).ceil().max(1.0) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::access::{build_index, BuildConfig};
    use crate::corpus::{random_rlslg, random_slg};
    use crate::grammar::{expand, trivial_builder};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn abab_wraps() {
        let g = trivial_builder(&[0, 1, 0, 1]).unwrap();
        let ix = build_index(&g, &BuildConfig::with_tau(2.0)).unwrap();
        let t = Traversal::new(&ix).unwrap();
        let c = t.tree().char_new(3).unwrap();
        let f = t.tree().forward(&c).unwrap();
        assert_eq!((f.pos(), f.symbol()), (0, 0));
        assert_eq!(t.tree().backward(&f).unwrap().pos(), 3);
    }

    #[test]
    fn single_character_is_fixed_point() {
        let g = trivial_builder(&[7]).unwrap();
        let ix = build_index(&g, &BuildConfig::with_tau(2.0)).unwrap();
        let t = Traversal::new(&ix).unwrap();
        let c = t.tree().char_new(0).unwrap();
        assert_eq!(t.tree().forward(&c).unwrap().pos(), 0);
        assert_eq!(t.extract(0, 1).unwrap(), vec![7]);
        assert_eq!(t.extract(0, 0).unwrap(), Vec::<u32>::new());
        assert!(matches!(t.extract(1, 1), Err(Error::RangeOutOfBounds { .. })));
    }

    #[test]
    fn cycles_visit_every_position() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for it in 0..40 {
            let g = if it % 2 == 0 {
                random_slg(&mut rng, 3, 8, 4, it % 4 == 0, 2000)
            } else {
                random_rlslg(&mut rng, 3, 8, 4, it % 4 == 1, 2000)
            };
            let text = expand(&g, g.start, 1 << 20).unwrap();
            let ix = build_index(&g, &BuildConfig::with_tau(2.0)).unwrap();
            let t = Traversal::new(&ix).unwrap();
            let n = text.len();
            let start = rng.gen_range(0..n);
            let mut c = t.tree().char_at(start as u64).unwrap();
            let mut cum = vec![0u64];
            for &x in &text {
                cum.push(cum.last().unwrap() + g.terminal_weights[x as usize]);
            }
            for k in 0..n {
                let j = (start + k) % n;
                assert_eq!((c.pos(), c.symbol(), c.offset()), (j as u64, text[j], cum[j]));
                c = t.tree().forward(&c).unwrap();
            }
            assert_eq!(c.pos(), start as u64);
            for k in 0..n {
                c = t.tree().backward(&c).unwrap();
                assert_eq!(c.pos(), ((start + 2 * n - 1 - k) % n) as u64);
            }
        }
    }

    #[test]
    fn fast_cursor_blocks() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for it in 0..40 {
            let g = random_rlslg(&mut rng, 2 + it % 3, 8, 4, false, 3000);
            let text = expand(&g, g.start, 1 << 20).unwrap();
            let n = text.len();
            let cfg = BuildConfig { b: Some(1 + it % 5), ..BuildConfig::with_tau(2.0) };
            let ix = build_index(&g, &cfg).unwrap();
            let t = Traversal::new(&ix).unwrap();
            let b = t.block().unwrap();
            for _ in 0..50 {
                let i = rng.gen_range(0..n);
                let m = rng.gen_range(1..3 * n + 2);
                let p = t.fast_new(i as u64).unwrap();
                let (q, block, steps) = t.fast_forward(&p, m).unwrap();
                let want: Vec<u32> = (0..m).map(|k| text[(i + k) % n]).collect();
                assert_eq!(block.to_vec(), want);
                assert_eq!(q.pos(), ((i + m) % n) as u64);
                assert!(steps <= 2 + m.div_ceil(b));
                let (back, rev, bsteps) = t.fast_backward(&q, m).unwrap();
                assert_eq!(back.pos(), i as u64);
                assert_eq!(rev.to_vec(), want);
                assert!(bsteps <= 2 + m.div_ceil(b));
                if i + m <= n {
                    assert_eq!(t.extract(i as u64, m as u64).unwrap(), &text[i..i + m]);
                }
            }
        }
    }

    #[test]
    fn weighted_extract_by_position() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..20 {
            let g = random_slg(&mut rng, 3, 8, 4, true, 2000);
            let text = expand(&g, g.start, 1 << 20).unwrap();
            let ix = build_index(&g, &BuildConfig::with_tau(3.0)).unwrap();
            let t = Traversal::new(&ix).unwrap();
            assert!(!t.has_fast() || g.is_unweighted());
            for _ in 0..30 {
                let i = rng.gen_range(0..text.len());
                let m = rng.gen_range(0..=text.len() - i);
                assert_eq!(t.extract(i as u64, m as u64).unwrap(), &text[i..i + m]);
            }
        }
    }
}

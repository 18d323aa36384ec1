use crate::access::{ChildHit, TopIndex};
use crate::error::{Error, Result};
use crate::grammar::Sym;
use crate::succinct::LevelAncestor;
use std::sync::Arc;

/// Position of a node among its siblings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FrameKind {
    Root,
    Middle,
    /// Leftmost child; the link is the nearest ancestor that is not one.
    Left,
    /// Rightmost child; the link is the nearest ancestor that is not one.
    Right,
}

#[derive(Debug, PartialEq, Eq)]
struct Frame {
    kind: FrameKind,
    sym: Sym,
    offset: u64,
    link: Option<Arc<Frame>>,
}

/// A pointer to a parse-tree node. Cheap to clone; derived cursors share
/// their ancestor frames.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeCursor {
    frame: Arc<Frame>,
}

impl NodeCursor {
    fn new(kind: FrameKind, sym: Sym, offset: u64, link: Option<Arc<Frame>>) -> Self {
        NodeCursor { frame: Arc::new(Frame { kind, sym, offset, link }) }
    }

    pub fn sym(&self) -> Sym {
        self.frame.sym
    }

    /// Weighted offset of the node.
    pub fn offset(&self) -> u64 {
        self.frame.offset
    }

    pub fn kind(&self) -> FrameKind {
        self.frame.kind
    }

    fn link(&self) -> NodeCursor {
        NodeCursor { frame: self.frame.link.clone().expect("non-root frames are linked") }
    }
}

/// Node-pointer operations over the parse tree of a [`TopIndex`].
///
/// The leftmost-child and rightmost-child forests have one node per symbol;
/// the parent of a variable is its first (last) child symbol.
#[derive(Debug, Clone)]
pub struct Tree<'a> {
    top: &'a TopIndex,
    left: LevelAncestor,
    right: LevelAncestor,
}

impl<'a> Tree<'a> {
    pub fn new(top: &'a TopIndex) -> Result<Tree<'a>> {
        let g = top.grammar();
        let n = g.symbol_count();
        let mut lp = vec![None; n];
        let mut rp = vec![None; n];
        for v in 0..g.variable_count() {
            let s = g.var_sym(v);
            let rule = g.rule(s);
            if rule.len() == 1 && rule[0].exp == 1 {
                return Err(Error::InvalidParameter("unary rules must be dissolved first".into()));
            }
            lp[s as usize] = Some(rule[0].sym as usize);
            rp[s as usize] = Some(rule[rule.len() - 1].sym as usize);
        }
        Ok(Tree { top, left: LevelAncestor::build(&lp)?, right: LevelAncestor::build(&rp)? })
    }

    pub fn top(&self) -> &'a TopIndex {
        self.top
    }

    fn weight(&self, s: Sym) -> u64 {
        self.top.weight_of(s)
    }

    pub fn root(&self) -> NodeCursor {
        NodeCursor::new(FrameKind::Root, self.top.grammar().start, 0, None)
    }

    pub fn is_leaf(&self, p: &NodeCursor) -> bool {
        self.top.is_terminal(p.sym())
    }

    /// The child of `p` whose span contains weighted position `i`.
    pub fn push_child(&self, p: &NodeCursor, i: u64) -> Result<NodeCursor> {
        self.push_child_hit(p, i).map(|(c, _)| c)
    }

    pub(crate) fn push_child_hit(&self, p: &NodeCursor, i: u64) -> Result<(NodeCursor, ChildHit)> {
        let (a, wa) = (p.offset(), self.weight(p.sym()));
        let hit = self.top.child(p.sym(), a, i)?;
        let (b, wb) = (hit.offset, hit.weight);
        let c = if a == b {
            let link = if p.kind() == FrameKind::Left { p.link() } else { p.clone() };
            NodeCursor::new(FrameKind::Left, hit.sym, b, Some(link.frame))
        } else if b + wb == a + wa {
            let link = if p.kind() == FrameKind::Right { p.link() } else { p.clone() };
            NodeCursor::new(FrameKind::Right, hit.sym, b, Some(link.frame))
        } else {
            NodeCursor::new(FrameKind::Middle, hit.sym, b, Some(p.frame.clone()))
        };
        Ok((c, hit))
    }

    /// The parent of `p`.
    pub fn pop(&self, p: &NodeCursor) -> Result<NodeCursor> {
        let a = p.sym() as usize;
        match p.kind() {
            FrameKind::Root => Err(Error::PopAtRoot),
            FrameKind::Middle => Ok(p.link()),
            FrameKind::Left => {
                let up = p.link();
                let want = self.left.level(a) + 1;
                if self.left.level(up.sym() as usize) == want {
                    return Ok(up);
                }
                let anc = self.left.ancestor(up.sym() as usize, want)? as Sym;
                Ok(NodeCursor::new(FrameKind::Left, anc, p.offset(), Some(up.frame)))
            }
            FrameKind::Right => {
                let up = p.link();
                let want = self.right.level(a) + 1;
                if self.right.level(up.sym() as usize) == want {
                    return Ok(up);
                }
                let anc = self.right.ancestor(up.sym() as usize, want)? as Sym;
                let off = p.offset() + self.weight(p.sym()) - self.weight(anc);
                Ok(NodeCursor::new(FrameKind::Right, anc, off, Some(up.frame)))
            }
        }
    }

    /// Lowest ancestor-or-self that is the root or has a left sibling.
    pub fn pop_left(&self, p: &NodeCursor) -> NodeCursor {
        if p.kind() == FrameKind::Left {
            p.link()
        } else {
            p.clone()
        }
    }

    /// Lowest ancestor-or-self that is the root or has a right sibling.
    pub fn pop_right(&self, p: &NodeCursor) -> NodeCursor {
        if p.kind() == FrameKind::Right {
            p.link()
        } else {
            p.clone()
        }
    }

    /// Leftmost leaf below `p`.
    pub fn push_left(&self, p: &NodeCursor) -> NodeCursor {
        let a = p.sym() as usize;
        if self.left.level(a) == 0 {
            return p.clone();
        }
        let leaf = self.left.ancestor(a, 0).expect("level 0 exists") as Sym;
        let link = if p.kind() == FrameKind::Left { p.link() } else { p.clone() };
        NodeCursor::new(FrameKind::Left, leaf, p.offset(), Some(link.frame))
    }

    /// Rightmost leaf below `p`.
    pub fn push_right(&self, p: &NodeCursor) -> NodeCursor {
        let a = p.sym() as usize;
        if self.right.level(a) == 0 {
            return p.clone();
        }
        let leaf = self.right.ancestor(a, 0).expect("level 0 exists") as Sym;
        let off = p.offset() + self.weight(p.sym()) - self.weight(leaf);
        let link = if p.kind() == FrameKind::Right { p.link() } else { p.clone() };
        NodeCursor::new(FrameKind::Right, leaf, off, Some(link.frame))
    }

    /// Next sibling; the root is its own sibling.
    pub fn right_sibling(&self, p: &NodeCursor) -> Result<NodeCursor> {
        if p.kind() == FrameKind::Root {
            return Ok(p.clone());
        }
        let parent = self.pop(p)?;
        self.push_child(&parent, p.offset() + self.weight(p.sym()))
    }

    /// Previous sibling; the root is its own sibling.
    pub fn left_sibling(&self, p: &NodeCursor) -> Result<NodeCursor> {
        if p.kind() == FrameKind::Root {
            return Ok(p.clone());
        }
        let parent = self.pop(p)?;
        self.push_child(&parent, p.offset() - 1)
    }

    /// Bits of the two level-ancestor structures.
    pub fn bits(&self) -> u64 {
        self.left.bits() + self.right.bits()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::access::Counting;
    use crate::corpus::{random_rlslg, random_slg};
    use crate::grammar::{parse_text, simplify, Grammar};
    use crate::shaping::Tau;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn top_of(g: &Grammar) -> TopIndex {
        let (h, _) = simplify(g).unwrap();
        let t = Tau::new(2.0).unwrap();
        TopIndex::build(h, t, t, Counting::Weights, &[], &[]).unwrap()
    }

    /// Explicit parse tree: (sym, offset, parent, children).
    struct Explicit {
        nodes: Vec<(Sym, u64, Option<usize>, Vec<usize>)>,
    }

    impl Explicit {
        fn new(top: &TopIndex) -> Explicit {
            let g = top.grammar();
            let mut nodes = vec![(g.start, 0u64, None, Vec::new())];
            let mut i = 0;
            while i < nodes.len() {
                let (s, off) = (nodes[i].0, nodes[i].1);
                if !g.is_terminal(s) {
                    let mut o = off;
                    for r in g.rule(s) {
                        for _ in 0..r.exp {
                            nodes.push((r.sym, o, Some(i), Vec::new()));
                            let id = nodes.len() - 1;
                            nodes[i].3.push(id);
                            o += top.weight_of(r.sym);
                        }
                    }
                }
                i += 1;
            }
            Explicit { nodes }
        }

        fn key(&self, v: usize) -> (Sym, u64) {
            (self.nodes[v].0, self.nodes[v].1)
        }

        fn sibling_index(&self, v: usize) -> Option<(usize, usize)> {
            let p = self.nodes[v].2?;
            let k = self.nodes[p].3.iter().position(|&c| c == v).unwrap();
            Some((k, self.nodes[p].3.len()))
        }

        fn pop_left(&self, mut v: usize) -> usize {
            while let Some((k, _)) = self.sibling_index(v) {
                if k > 0 {
                    break;
                }
                v = self.nodes[v].2.unwrap();
            }
            v
        }

        fn pop_right(&self, mut v: usize) -> usize {
            while let Some((k, n)) = self.sibling_index(v) {
                if k + 1 < n {
                    break;
                }
                v = self.nodes[v].2.unwrap();
            }
            v
        }

        fn push_left(&self, mut v: usize) -> usize {
            while let Some(&c) = self.nodes[v].3.first() {
                v = c;
            }
            v
        }

        fn push_right(&self, mut v: usize) -> usize {
            while let Some(&c) = self.nodes[v].3.last() {
                v = c;
            }
            v
        }
    }

    #[test]
    fn hand_example() {
        let g = parse_text("start: S\nS -> A B\nA -> 'a' 'b'\nB -> 'c' 'd'\n").unwrap();
        let top = top_of(&g);
        let tree = Tree::new(&top).unwrap();
        let root = tree.root();
        let b = tree.push_child(&root, 2).unwrap();
        assert_eq!(b.offset(), 2);
        assert_eq!(top.grammar().rule(b.sym())[0].sym, 'c' as u32);
        assert_eq!(b.kind(), FrameKind::Right);
        let l = tree.push_left(&root);
        assert_eq!((l.sym(), l.offset()), ('a' as u32, 0));
        assert_eq!(tree.pop_left(&l), root);
        assert!(matches!(tree.pop(&root), Err(Error::PopAtRoot)));
        assert!(matches!(tree.push_child(&l, 0), Err(Error::ChildOnLeaf)));
        assert!(matches!(tree.push_child(&b, 0), Err(Error::IndexOutOfNode { .. })));
    }

    #[test]
    fn random_walks_match_explicit_tree() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for it in 0..80 {
            let g = if it % 2 == 0 {
                random_slg(&mut rng, 3, 10, 4, it % 4 == 0, 3000)
            } else {
                random_rlslg(&mut rng, 3, 10, 4, it % 4 == 1, 3000)
            };
            let top = top_of(&g);
            let tree = Tree::new(&top).unwrap();
            let ex = Explicit::new(&top);
            let mut p = tree.root();
            let mut v = 0usize;
            for _ in 0..400 {
                assert_eq!((p.sym(), p.offset()), ex.key(v));
                match rng.gen_range(0..6) {
                    0 if !ex.nodes[v].3.is_empty() => {
                        let w = top.weight_of(p.sym());
                        let i = p.offset() + rng.gen_range(0..w);
                        p = tree.push_child(&p, i).unwrap();
                        v = *ex.nodes[v].3.iter().find(|&&c| ex.nodes[c].1 <= i && i < ex.nodes[c].1 + top.weight_of(ex.nodes[c].0)).unwrap();
                    }
                    1 if v != 0 => {
                        p = tree.pop(&p).unwrap();
                        v = ex.nodes[v].2.unwrap();
                    }
                    2 => {
                        p = tree.pop_left(&p);
                        v = ex.pop_left(v);
                    }
                    3 => {
                        p = tree.pop_right(&p);
                        v = ex.pop_right(v);
                    }
                    4 => {
                        p = tree.push_left(&p);
                        v = ex.push_left(v);
                    }
                    5 => {
                        p = tree.push_right(&p);
                        v = ex.push_right(v);
                    }
                    _ => {}
                }
            }
        }
    }
}

use super::child::{ChildHit, ChildIndex, NONE};
use crate::error::{Error, Result};
use crate::grammar::{derive_stats, Grammar, Sym};
use crate::shaping::{parse_tree_height, Tau};
use crate::succinct::BucketStrategy;

/// How the per-symbol character counts relate to weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Counting {
    /// Counts equal weights; nothing is stored.
    Weights,
    /// Counts are given per terminal; the last marked position is not tracked.
    Counts,
    /// Counts and last marked positions are given per terminal.
    Marks,
}

/// Child structures for every variable of a nice grammar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopIndex {
    pub(crate) grammar: Grammar,
    pub(crate) weight: Vec<u64>,
    pub(crate) count: Vec<u64>,
    pub(crate) last: Vec<u64>,
    pub(crate) nodes: Vec<ChildIndex>,
    pub(crate) tau_root: Tau,
    pub(crate) tau_var: Tau,
    pub(crate) counting: Counting,
    pub(crate) height: u32,
}

/// The terminal reached by a descent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Landing {
    pub sym: Sym,
    pub offset: u64,
    /// Counted characters before the terminal.
    pub count: u64,
    /// Last marked position strictly before the terminal, or `None`.
    pub last: Option<u64>,
    pub steps: u32,
}

impl TopIndex {
    /// Builds child structures for `g`. The start uses `tau_root`, every
    /// other variable `tau_var`. `term_count` and `term_last` give per-terminal
    /// annotations as selected by `counting`.
    pub fn build(
        g: Grammar,
        tau_root: Tau,
        tau_var: Tau,
        counting: Counting,
        term_count: &[u64],
        term_last: &[u64],
    ) -> Result<TopIndex> {
        let st = derive_stats(&g)?;
        let t = g.terminal_count();
        let n = g.symbol_count();
        let mut count = Vec::new();
        let mut last = Vec::new();
        if counting != Counting::Weights {
            count = vec![0u64; n];
            count[..t].copy_from_slice(&term_count[..t]);
        }
        if counting == Counting::Marks {
            last = vec![NONE; n];
            last[..t].copy_from_slice(&term_last[..t]);
        }
        for &v in &st.order {
            let rule = g.rule(v);
            if !count.is_empty() {
                count[v as usize] = rule.iter().map(|r| r.exp * count[r.sym as usize]).sum();
            }
            if !last.is_empty() {
                let mut off = st.weight[v as usize];
                for r in rule.iter().rev() {
                    let wb = st.weight[r.sym as usize];
                    off -= r.exp * wb;
                    if last[r.sym as usize] != NONE {
                        last[v as usize] = off + (r.exp - 1) * wb + last[r.sym as usize];
                        break;
                    }
                }
            }
        }
        let mut nodes = Vec::with_capacity(g.variable_count());
        for v in 0..g.variable_count() {
            let s = g.var_sym(v);
            let tau = if s == g.start { tau_root } else { tau_var };
            let mut ci = ChildIndex::build(g.rule(s), &st.weight, tau, BucketStrategy::Scan)?;
            if !count.is_empty() {
                let mut c = Vec::with_capacity(ci.runs.len() + 1);
                c.push(0);
                for r in &ci.runs {
                    c.push(c.last().unwrap() + r.exp * count[r.sym as usize]);
                }
                ci.counts = c;
            }
            if !last.is_empty() {
                let mut l = Vec::with_capacity(ci.runs.len() + 1);
                l.push(NONE);
                for (j, r) in ci.runs.iter().enumerate() {
                    let lb = last[r.sym as usize];
                    let wb = st.weight[r.sym as usize];
                    l.push(if lb != NONE { ci.pref[j] + (r.exp - 1) * wb + lb } else { l[j] });
                }
                ci.lasts = l;
            }
            nodes.push(ci);
        }
        let height = parse_tree_height(&g)?;
        Ok(TopIndex { grammar: g, weight: st.weight, count, last, nodes, tau_root, tau_var, counting, height })
    }

    pub fn grammar(&self) -> &Grammar {
        &self.grammar
    }

    pub fn weights(&self) -> &[u64] {
        &self.weight
    }

    pub fn weight_of(&self, s: Sym) -> u64 {
        self.weight[s as usize]
    }

    /// Counted characters in the expansion of `s`.
    pub fn count_of(&self, s: Sym) -> u64 {
        if self.count.is_empty() {
            self.weight[s as usize]
        } else {
            self.count[s as usize]
        }
    }

    pub fn total_weight(&self) -> u64 {
        self.weight[self.grammar.start as usize]
    }

    pub fn tau_root(&self) -> Tau {
        self.tau_root
    }

    pub fn tau_var(&self) -> Tau {
        self.tau_var
    }

    /// Parse-tree height of the grammar.
    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn is_terminal(&self, s: Sym) -> bool {
        self.grammar.is_terminal(s)
    }

    /// Child structure of variable `s`.
    pub fn node(&self, s: Sym) -> &ChildIndex {
        &self.nodes[s as usize - self.grammar.terminal_count()]
    }

    /// The child of `(s, a)` covering weighted position `i`.
    #[inline]
    pub fn child(&self, s: Sym, a: u64, i: u64) -> Result<ChildHit> {
        if self.grammar.is_terminal(s) {
            return Err(Error::ChildOnLeaf);
        }
        self.node(s).child(a, i)
    }

    /// Descends from the root to the terminal covering `i`.
    pub fn descend(&self, i: u64) -> Result<Landing> {
        let total = self.total_weight();
        if i >= total {
            return Err(Error::IndexOutOfRange { index: i, weight: total });
        }
        let mut s = self.grammar.start;
        let mut a = 0u64;
        let mut count = 0u64;
        let mut last: Option<u64> = None;
        let mut steps = 0u32;
        let t = self.grammar.terminal_count();
        while s as usize >= t {
            let ci = &self.nodes[s as usize - t];
            let hit = ci.child(a, i)?;
            if !ci.counts.is_empty() {
                count += ci.counts[hit.run] + hit.copy * self.count[hit.sym as usize];
            }
            if !ci.lasts.is_empty() {
                let lb = self.last[hit.sym as usize];
                let cand = if hit.copy > 0 && lb != NONE {
                    a + ci.pref[hit.run] + (hit.copy - 1) * hit.weight + lb
                } else if ci.lasts[hit.run] != NONE {
                    a + ci.lasts[hit.run]
                } else {
                    NONE
                };
                if cand != NONE {
                    last = Some(last.map_or(cand, |l| l.max(cand)));
                }
            }
            s = hit.sym;
            a = hit.offset;
            steps += 1;
        }
        if self.count.is_empty() {
            count = a;
        }
        Ok(Landing { sym: s, offset: a, count, last, steps })
    }

    /// Total logical size in bits of all child structures.
    pub fn bits(&self) -> u64 {
        self.nodes.iter().map(|c| c.bits()).sum()
    }

    /// Largest bucket load over all variables.
    pub fn max_bucket_load(&self) -> usize {
        self.nodes.iter().map(|c| c.max_bucket_load()).max().unwrap_or(0)
    }

    /// Variables whose bucket load exceeds `2 d ceil(log tau)` for their tau,
    /// with the load and the bound.
    pub fn sparsity_violations(&self, d: usize) -> Vec<(Sym, usize, usize)> {
        let mut out = Vec::new();
        for (v, ci) in self.nodes.iter().enumerate() {
            let s = self.grammar.var_sym(v);
            let tau = if s == self.grammar.start { self.tau_root } else { self.tau_var };
            let bound = 2 * d * tau.ceil_log2() as usize;
            if ci.max_bucket_load() > bound {
                out.push((s, ci.max_bucket_load(), bound));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{expand, parse_text};

    #[test]
    fn descends_to_every_position() {
        let g = parse_text("start: S\nweights: 'x'=3\nS -> A^3 'y' A\nA -> 'x' 'y' 'y'\n").unwrap();
        let text = expand(&g, g.start, 100).unwrap();
        let tau = Tau::new(2.0).unwrap();
        let top = TopIndex::build(g.clone(), tau, tau, Counting::Counts, &vec![1; g.terminal_count()], &[]).unwrap();
        let mut i = 0;
        for (j, &c) in text.iter().enumerate() {
            for _ in 0..g.terminal_weights[c as usize] {
                let l = top.descend(i).unwrap();
                assert_eq!((l.sym, l.count), (c, j as u64));
                i += 1;
            }
        }
        assert!(matches!(top.descend(i), Err(Error::IndexOutOfRange { .. })));
    }
}

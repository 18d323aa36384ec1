use crate::grammar::{Grammar, Sym};

/// Heavy-child forest of an SLG.
///
/// Node `v` stands for variable `v` (symbol `terminal_count + v`). There is an
/// arc from `v` to its heavy child when that child is a variable weighing more
/// than half of `v`. `left[v]` holds the siblings left of the heavy child in
/// reverse order and `right[v]` the siblings to its right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeavyForest {
    pub parent: Vec<Option<u32>>,
    pub left: Vec<Vec<Sym>>,
    pub right: Vec<Vec<Sym>>,
    /// Nodes ordered so that every arc target precedes its source.
    pub order: Vec<u32>,
}

impl HeavyForest {
    /// Builds the forest of `g`, whose rules must all have exponent one.
    /// `weight` is indexed by symbol and `topo` lists variables children first.
    pub fn from_grammar(g: &Grammar, weight: &[u64], topo: &[Sym]) -> Self {
        let t = g.terminal_count();
        let nv = g.variable_count();
        let mut f = HeavyForest {
            parent: vec![None; nv],
            left: vec![Vec::new(); nv],
            right: vec![Vec::new(); nv],
            order: topo.iter().map(|&s| s as u32 - t as u32).collect(),
        };
        for v in 0..nv {
            let rule = &g.rules[v];
            let wa = weight[t + v];
            let heavy = rule
                .iter()
                .position(|r| !g.is_terminal(r.sym) && r.exp == 1 && weight[r.sym as usize] as u128 * 2 > wa as u128);
            if let Some(i) = heavy {
                f.parent[v] = Some(rule[i].sym - t as u32);
                f.left[v] = rule[..i].iter().rev().map(|r| r.sym).collect();
                f.right[v] = rule[i + 1..].iter().map(|r| r.sym).collect();
            }
        }
        f
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// The root reached from every node.
    pub fn roots(&self) -> Vec<u32> {
        let mut root: Vec<u32> = (0..self.len() as u32).collect();
        for &v in &self.order {
            if let Some(p) = self.parent[v as usize] {
                root[v as usize] = root[p as usize];
            }
        }
        root
    }
}

//! Grammars for root-to-node label concatenations in a heavy forest.
//!
//! Every node gets an item (an atom or a fragment variable) whose expansion is
//! the concatenation of the labels on its root path. Items are combined by a
//! weighted-median split that keeps fragment variables contracting.

use super::HeavyForest;
use crate::grammar::Sym;
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// Fragment grammar over atoms `[0, base)`; ids from `base` on are its variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fragment {
    pub base: u32,
    pub rules: Vec<Vec<Sym>>,
    pub weights: Vec<u64>,
    /// Per forest node, the item spelling its path labels (`None` if empty).
    pub node_item: Vec<Option<Sym>>,
}

impl Fragment {
    pub fn is_var(&self, s: Sym) -> bool {
        s >= self.base
    }

    pub fn rule(&self, s: Sym) -> &[Sym] {
        &self.rules[(s - self.base) as usize]
    }

    /// Expansion of an item as a sequence of atoms.
    pub fn expand(&self, s: Sym) -> Vec<Sym> {
        let mut out = Vec::new();
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            if self.is_var(x) {
                stack.extend(self.rule(x).iter().rev());
            } else {
                out.push(x);
            }
        }
        out
    }
}

pub(crate) struct FragmentBuilder<'a> {
    base: u32,
    atom_weight: &'a [u64],
    rules: Vec<Vec<Sym>>,
    weights: Vec<u64>,
    memo: HashMap<Vec<Sym>, Sym>,
}

impl<'a> FragmentBuilder<'a> {
    pub(crate) fn new(base: u32, atom_weight: &'a [u64]) -> Self {
        FragmentBuilder { base, atom_weight, rules: Vec::new(), weights: Vec::new(), memo: HashMap::new() }
    }

    fn weight(&self, s: Sym) -> u64 {
        if s >= self.base {
            self.weights[(s - self.base) as usize]
        } else {
            self.atom_weight[s as usize]
        }
    }

    fn intern(&mut self, rule: Vec<Sym>) -> Sym {
        if let Some(&s) = self.memo.get(&rule) {
            return s;
        }
        let w = rule.iter().map(|&s| self.weight(s)).sum();
        let id = self.base + self.rules.len() as u32;
        self.rules.push(rule.clone());
        self.weights.push(w);
        self.memo.insert(rule, id);
        id
    }

    /// An item spelling the concatenation of `items`.
    pub(crate) fn build(&mut self, mut items: Vec<Sym>) -> Option<Sym> {
        match items.len() {
            0 => return None,
            1 => return Some(items[0]),
            _ => {}
        }
        let k = loop {
            let total: u128 = items.iter().map(|&s| self.weight(s) as u128).sum();
            let mut pre = 0u128;
            let mut k = 0;
            for (i, &s) in items.iter().enumerate() {
                if 2 * (pre + self.weight(s) as u128) > total {
                    k = i;
                    break;
                }
                pre += self.weight(s) as u128;
            }
            let s = items[k];
            if s >= self.base && 2 * self.weight(s) as u128 > total {
                let inner = self.rules[(s - self.base) as usize].clone();
                items.splice(k..=k, inner);
                continue;
            }
            break k;
        };
        let right = self.build(items[k + 1..].to_vec());
        let left = self.build(items[..k].to_vec());
        let mut rule = Vec::with_capacity(3);
        rule.extend(left);
        rule.push(items[k]);
        rule.extend(right);
        Some(self.intern(rule))
    }

    pub(crate) fn finish(self, node_item: Vec<Option<Sym>>) -> Fragment {
        Fragment { base: self.base, rules: self.rules, weights: self.weights, node_item }
    }
}

/// Builds the fragment for one side of `forest`.
///
/// For [`Side::Left`] the labels are used as stored (reversed), so a node's
/// item spells its left context backwards; reversing every fragment rule
/// turns it into the left context itself.
pub fn prefix_grammar(forest: &HeavyForest, atom_weight: &[u64], base: u32, side: Side) -> Fragment {
    let mut b = FragmentBuilder::new(base, atom_weight);
    let mut node_item: Vec<Option<Sym>> = vec![None; forest.len()];
    for &v in &forest.order {
        let v = v as usize;
        let Some(p) = forest.parent[v] else { continue };
        let label = match side {
            Side::Left => &forest.left[v],
            Side::Right => &forest.right[v],
        };
        let mut items: Vec<Sym> = node_item[p as usize].into_iter().collect();
        items.extend_from_slice(label);
        node_item[v] = b.build(items);
    }
    b.finish(node_item)
}

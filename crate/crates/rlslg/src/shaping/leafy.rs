//! Leafy grammars: leaves spell `[b, 2b)` characters, top variables only
//! refer to variables.
//!
//! The top part is kept as a grammar whose terminals are the leaves; leaf `i`
//! is top terminal `i` and weighs the total weight of its characters.

use super::nice::{make_nice, NiceGrammar};
use super::Tau;
use crate::contracting::contract;
use crate::error::{Error, Result};
use crate::grammar::{derive_stats, extract_substring, normalize, push_run, Flavor, Grammar, Run, Stats, Sym};
use crate::succinct::{bits_for, PackedString};
use std::collections::HashMap;

/// Default limit on `b * ceil(log sigma)`.
pub const DEFAULT_BLOCK_BUDGET: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafyGrammar {
    pub top: Grammar,
    pub leaves: Vec<PackedString>,
    pub b: usize,
    /// Weights of the characters stored in leaves.
    pub char_weights: Vec<u64>,
}

impl LeafyGrammar {
    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    /// Bits of all leaf blocks.
    pub fn leaf_bits(&self) -> u64 {
        self.leaves.iter().map(|l| l.bits()).sum()
    }
}

/// A leafy grammar whose top part is `(tau_root, tau_var)`-nice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafyNiceGrammar {
    pub leafy: LeafyGrammar,
    pub tau_root: Tau,
    pub tau_var: Tau,
    pub d: usize,
}

impl LeafyNiceGrammar {
    pub fn nice_top(&self) -> NiceGrammar {
        NiceGrammar { grammar: self.leafy.top.clone(), tau_root: self.tau_root, tau_var: self.tau_var, d: self.d }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Node {
    Leaf(u32),
    Top(u32),
}

struct Builder<'a> {
    g: &'a Grammar,
    st: &'a Stats,
    leaves: Vec<Vec<Sym>>,
    memo: HashMap<Vec<Sym>, u32>,
    tops: Vec<Vec<(Node, u64)>>,
}

impl Builder<'_> {
    fn leaf(&mut self, s: Vec<Sym>) -> Node {
        if let Some(&id) = self.memo.get(&s) {
            return Node::Leaf(id);
        }
        let id = self.leaves.len() as u32;
        self.leaves.push(s.clone());
        self.memo.insert(s, id);
        Node::Leaf(id)
    }

    fn top(&mut self, rule: Vec<(Node, u64)>) -> Node {
        self.tops.push(rule);
        Node::Top(self.tops.len() as u32 - 1)
    }

    fn text(&self, s: Sym, lo: u64, hi: u64) -> Vec<Sym> {
        extract_substring(self.g, self.st, s, lo, hi)
    }

    fn whole(&self, s: Sym) -> Vec<Sym> {
        self.text(s, 0, self.st.len[s as usize])
    }

    fn leaf_str(&self, n: Node) -> &[Sym] {
        match n {
            Node::Leaf(i) => &self.leaves[i as usize],
            Node::Top(_) => unreachable!("shapes start and end with leaves"),
        }
    }
}

fn ones(nodes: &[Node]) -> Vec<(Node, u64)> {
    nodes.iter().map(|&n| (n, 1)).collect()
}

/// Builds a `b`-leafy grammar for `g`. The mapping covers symbols whose
/// expansion has at least `b` characters.
pub fn make_leafy(g: &Grammar, b: usize) -> Result<(LeafyGrammar, Vec<Option<Sym>>)> {
    make_leafy_with_budget(g, b, DEFAULT_BLOCK_BUDGET)
}

pub fn make_leafy_with_budget(g: &Grammar, b: usize, budget_bits: u64) -> Result<(LeafyGrammar, Vec<Option<Sym>>)> {
    let width = bits_for(g.terminal_count() as u64);
    let bits = b as u64 * width as u64;
    if bits > budget_bits {
        return Err(Error::BlockTooWide { bits, budget: budget_bits });
    }
    let (n, nmap) = normalize(g)?;
    let st = derive_stats(&n)?;
    let total = st.len[n.start as usize];
    if b == 0 || b as u64 > total {
        return Err(Error::InvalidParameter(format!("block size {b} outside [1, {total}]")));
    }
    let bb = b as u64;
    let mut bl = Builder { g: &n, st: &st, leaves: Vec::new(), memo: HashMap::new(), tops: Vec::new() };
    let mut shape: Vec<Vec<Node>> = vec![Vec::new(); n.symbol_count()];
    let mut image: Vec<Option<Node>> = vec![None; n.symbol_count()];
    if b == 1 {
        for t in 0..n.terminal_count() {
            let l = bl.leaf(vec![t as Sym]);
            shape[t] = vec![l];
            image[t] = Some(l);
        }
    }
    for &v in &st.order {
        let len = st.len[v as usize];
        if len < bb {
            continue;
        }
        let rule = n.rule(v);
        let nodes: Vec<Node> = if len < 2 * bb {
            vec![bl.leaf(bl.whole(v))]
        } else if len < 3 * bb {
            let l = bl.leaf(bl.text(v, 0, bb));
            let r = bl.leaf(bl.text(v, bb, len));
            vec![l, r]
        } else if rule.len() == 1 && rule[0].exp >= 3 {
            let (bsym, k) = (rule[0].sym, rule[0].exp);
            let lb = st.len[bsym as usize];
            if lb >= 2 * bb {
                // Case 4.1
                let sb = shape[bsym as usize].clone();
                let (first, last) = (sb[0], sb[sb.len() - 1]);
                let beta = &sb[1..sb.len() - 1];
                let mut rule = ones(beta);
                rule.push((last, 1));
                rule.push((image[bsym as usize].unwrap(), k - 2));
                rule.push((first, 1));
                rule.extend(ones(beta));
                let t = bl.top(rule);
                vec![first, t, last]
            } else {
                // Case 4.2
                let m = bb.div_ceil(lb);
                let block = m * lb;
                let q = (len - 2 * bb) / block;
                let residue = len - q * block;
                let a_l = (residue - bb).min(2 * bb - 1);
                let a_r = residue - a_l;
                let left = bl.leaf(bl.text(v, 0, a_l));
                let right = bl.leaf(bl.text(v, len - a_r, len));
                if q >= 1 {
                    let mid = bl.leaf(bl.text(v, a_l, a_l + block));
                    let t = bl.top(vec![(mid, q)]);
                    vec![left, t, right]
                } else {
                    vec![left, right]
                }
            }
        } else {
            let (bs, cs) = if rule.len() == 1 { (rule[0].sym, rule[0].sym) } else { (rule[0].sym, rule[1].sym) };
            let (lb, lc) = (st.len[bs as usize], st.len[cs as usize]);
            if lb >= bb && lc >= bb {
                // Case 3.1
                let sb = shape[bs as usize].clone();
                let sc = shape[cs as usize].clone();
                let mut mid = ones(&sb[1..]);
                mid.extend(ones(&sc[..sc.len() - 1]));
                if mid.is_empty() {
                    vec![sb[0], sc[sc.len() - 1]]
                } else {
                    let t = bl.top(mid);
                    vec![sb[0], t, sc[sc.len() - 1]]
                }
            } else if lb >= bb {
                // Case 3.2
                let sb = shape[bs as usize].clone();
                let (first, last) = (sb[0], sb[sb.len() - 1]);
                let beta: Vec<Node> = sb[1..sb.len() - 1].to_vec();
                let mut joined = bl.leaf_str(last).to_vec();
                joined.extend(bl.whole(cs));
                if (joined.len() as u64) < 2 * bb {
                    let l = bl.leaf(joined);
                    let mut out = vec![first];
                    out.extend(beta);
                    out.push(l);
                    out
                } else {
                    let right_part = joined.split_off(b);
                    let al = bl.leaf(joined);
                    let ar = bl.leaf(right_part);
                    let mut rule = ones(&beta);
                    rule.push((al, 1));
                    let t = bl.top(rule);
                    vec![first, t, ar]
                }
            } else {
                // Case 3.3
                let sc = shape[cs as usize].clone();
                let (first, last) = (sc[0], sc[sc.len() - 1]);
                let gamma: Vec<Node> = sc[1..sc.len() - 1].to_vec();
                let mut joined = bl.whole(bs);
                joined.extend_from_slice(bl.leaf_str(first));
                if (joined.len() as u64) < 2 * bb {
                    let l = bl.leaf(joined);
                    let mut out = vec![l];
                    out.extend(gamma);
                    out.push(last);
                    out
                } else {
                    let cut = joined.len() - b;
                    let right_part = joined.split_off(cut);
                    let al = bl.leaf(joined);
                    let ar = bl.leaf(right_part);
                    let mut rule = vec![(ar, 1)];
                    rule.extend(ones(&gamma));
                    let t = bl.top(rule);
                    vec![al, t, last]
                }
            }
        };
        let own = bl.top(ones(&nodes));
        shape[v as usize] = nodes;
        image[v as usize] = Some(own);
    }

    let nleaves = bl.leaves.len() as u32;
    let sym_of = |x: Node| match x {
        Node::Leaf(i) => i,
        Node::Top(t) => nleaves + t,
    };
    let leaf_weights: Vec<u64> = bl.leaves.iter().map(|l| l.iter().map(|&c| n.terminal_weights[c as usize]).sum()).collect();
    let mut top = Grammar { terminal_weights: leaf_weights, rules: Vec::with_capacity(bl.tops.len()), start: 0, flavor: Flavor::Rlslg };
    for rule in &bl.tops {
        let mut out = Vec::with_capacity(rule.len());
        for &(x, e) in rule {
            push_run(Flavor::Rlslg, &mut out, Run::new(sym_of(x), e));
        }
        top.rules.push(out);
    }
    top.start = sym_of(image[n.start as usize].expect("start is long enough"));
    let leaves = bl.leaves.iter().map(|l| PackedString::from_slice(width, l)).collect();
    let map = nmap.iter().map(|&s| image[s as usize].map(sym_of)).collect();
    Ok((LeafyGrammar { top, leaves, b, char_weights: n.terminal_weights.clone() }, map))
}

/// Leafy grammar whose top part is then made `(tau_root, tau_var)`-nice.
pub fn make_leafy_nice(g: &Grammar, b: usize, tau_root: Tau, tau_var: Tau) -> Result<(LeafyNiceGrammar, Vec<Option<Sym>>)> {
    make_leafy_nice_with_budget(g, b, tau_root, tau_var, DEFAULT_BLOCK_BUDGET)
}

pub fn make_leafy_nice_with_budget(g: &Grammar, b: usize, tau_root: Tau, tau_var: Tau, budget_bits: u64) -> Result<(LeafyNiceGrammar, Vec<Option<Sym>>)> {
    let (lg, lmap) = make_leafy_with_budget(g, b, budget_bits)?;
    let (c, cmap) = contract(&lg.top)?;
    let (nice, _) = make_nice(&c, tau_root, tau_var)?;
    let map = lmap.iter().map(|s| s.map(|s| cmap[s as usize])).collect();
    let leafy = LeafyGrammar { top: nice.grammar, ..lg };
    Ok((LeafyNiceGrammar { leafy, tau_root, tau_var, d: nice.d }, map))
}

/// Checks leaf lengths and the shape of every mapped image. `map` is the
/// mapping returned by [`make_leafy`].
pub fn leafy_violation(lg: &LeafyGrammar, map: &[Option<Sym>]) -> Option<String> {
    let b = lg.b;
    for (i, l) in lg.leaves.iter().enumerate() {
        if l.len() < b || l.len() >= 2 * b {
            return Some(format!("leaf {i} has length {}", l.len()));
        }
    }
    let top = &lg.top;
    for &img in map.iter().flatten() {
        if top.is_terminal(img) {
            continue;
        }
        let rule = top.rule(img);
        let leaf = |r: &Run| top.is_terminal(r.sym) && r.exp == 1;
        let ok = match rule.len() {
            1 => leaf(&rule[0]) || (top.is_terminal(rule[0].sym) && rule[0].exp == 2),
            2 => leaf(&rule[0]) && leaf(&rule[1]),
            3 => leaf(&rule[0]) && !top.is_terminal(rule[1].sym) && rule[1].exp == 1 && leaf(&rule[2]),
            _ => false,
        };
        if !ok {
            return Some(format!("image {img} has rule {rule:?}"));
        }
    }
    for rule in &top.rules {
        if rule.len() > 5 {
            return Some(format!("helper rule {rule:?} is too long"));
        }
    }
    None
}

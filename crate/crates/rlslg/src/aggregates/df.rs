//! The gap transform of a binary string.
//!
//! `df(0^k0 1 0^k1 1 ... 1 0^km) = z_k0 z_k1 ... z_km`: one symbol per run of
//! zeros, the runs being separated by ones. A prefix of `r + 1` symbols sums
//! to the number of zeros before the `r`-th one, which turns select into a
//! prefix sum.

use crate::error::{Error, Result};
use crate::grammar::{push_run, topo_order, Flavor, Grammar, Run, Sym};
use std::collections::BTreeMap;

/// Shape of `df(exp(A))` for a symbol `A` of the source grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DfShape {
    /// `df(exp(A)) = z_k`: the expansion has no ones.
    Short { k: u64 },
    /// `df(exp(A)) = z_left M z_right` where `M` is the expansion of `mid`
    /// (empty when `mid` is `None`).
    Long { left: u64, mid: Option<Sym>, right: u64 },
}

/// A run-length grammar over gap symbols `z_k`.
///
/// Terminal `t` stands for `z_{values[t]}`; every terminal weighs one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DfGrammar {
    pub grammar: Grammar,
    pub values: Vec<u64>,
    /// Shape of every symbol of the source grammar.
    pub shapes: Vec<DfShape>,
}

impl DfGrammar {
    /// `k` for the gap terminal `t`.
    pub fn value(&self, t: Sym) -> u64 {
        self.values[t as usize]
    }

    /// Number of symbols of `df(T)`, one more than the number of ones.
    pub fn text_len(&self) -> Result<u64> {
        Ok(crate::grammar::derive_stats(&self.grammar)?.start_len(&self.grammar))
    }
}

// Items before terminal ids are assigned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Item {
    Z(u64),
    V(usize),
}

#[derive(Debug, Clone)]
enum Acc {
    Short(u64),
    Long { left: u64, mid: Vec<(Item, u64)>, right: u64 },
}

struct Builder {
    rules: Vec<Vec<(Item, u64)>>,
}

fn push_item(out: &mut Vec<(Item, u64)>, it: Item, e: u64) {
    match out.last_mut() {
        Some((last, k)) if *last == it => *k += e,
        _ => out.push((it, e)),
    }
}

fn add(a: u64, b: u64) -> Result<u64> {
    a.checked_add(b).ok_or(Error::Overflow { bits: 64 })
}

impl Builder {
    fn var(&mut self, items: Vec<(Item, u64)>) -> Item {
        self.rules.push(items);
        Item::V(self.rules.len() - 1)
    }

    // Middle parts of finished symbols hold at most one item, of exponent 1.
    fn seal(&mut self, mid: Vec<(Item, u64)>) -> Vec<(Item, u64)> {
        if mid.is_empty() || (mid.len() == 1 && mid[0].1 == 1) {
            mid
        } else {
            let v = self.var(mid);
            vec![(v, 1)]
        }
    }

    fn concat(&mut self, x: Acc, y: Acc) -> Result<Acc> {
        Ok(match (x, y) {
            (Acc::Short(kb), Acc::Short(kc)) => Acc::Short(add(kb, kc)?),
            (Acc::Short(kb), Acc::Long { left, mid, right }) => Acc::Long { left: add(kb, left)?, mid, right },
            (Acc::Long { left, mid, right }, Acc::Short(kc)) => Acc::Long { left, mid, right: add(right, kc)? },
            (Acc::Long { left, mut mid, right: rb }, Acc::Long { left: lc, mid: mc, right }) => {
                push_item(&mut mid, Item::Z(add(rb, lc)?), 1);
                for (it, e) in mc {
                    push_item(&mut mid, it, e);
                }
                Acc::Long { left, mid, right }
            }
        })
    }

    // `k >= 1` copies of a finished shape.
    fn power(&mut self, x: &Acc, k: u64) -> Result<Acc> {
        if k == 1 {
            return Ok(x.clone());
        }
        Ok(match x {
            Acc::Short(kb) => Acc::Short(kb.checked_mul(k).ok_or(Error::Overflow { bits: 64 })?),
            Acc::Long { left, mid, right } => {
                let z = Item::Z(add(*right, *left)?);
                let mut out = mid.clone();
                match mid.first() {
                    None => push_item(&mut out, z, k - 1),
                    Some(&(it, e)) => {
                        // mid (z mid)^(k-1)
                        let unit = self.var(vec![(z, 1), (it, e)]);
                        push_item(&mut out, unit, k - 1);
                    }
                }
                Acc::Long { left: *left, mid: out, right: *right }
            }
        })
    }
}

/// The df grammar of a binary grammar: terminal 1 is a one, terminal 0 a
/// zero.
pub fn df_transform(g: &Grammar) -> Result<DfGrammar> {
    if g.terminal_count() > 2 {
        return Err(Error::NonBinaryAlphabet);
    }
    df_image(g, 1)
}

/// The df grammar of the image of `g` in which terminal `one` maps to a one
/// and every other terminal to a zero.
pub fn df_image(g: &Grammar, one: Sym) -> Result<DfGrammar> {
    g.validate()?;
    let t = g.terminal_count();
    let mut b = Builder { rules: Vec::new() };
    let mut acc: Vec<Option<Acc>> = vec![None; g.symbol_count()];
    for (c, slot) in acc.iter_mut().enumerate().take(t) {
        *slot = Some(if c as Sym == one {
            Acc::Long { left: 0, mid: Vec::new(), right: 0 }
        } else {
            Acc::Short(1)
        });
    }
    for v in topo_order(g)? {
        let mut cur: Option<Acc> = None;
        for r in g.rule(v) {
            let child = acc[r.sym as usize].as_ref().expect("children precede parents");
            let part = b.power(child, r.exp)?;
            cur = Some(match cur {
                None => part,
                Some(x) => b.concat(x, part)?,
            });
        }
        let done = match cur.expect("rules are nonempty") {
            Acc::Long { left, mid, right } => Acc::Long { left, mid: b.seal(mid), right },
            s => s,
        };
        acc[v as usize] = Some(done);
    }
    let acc: Vec<Acc> = acc.into_iter().map(|a| a.expect("every symbol is processed")).collect();
    let start_items = match &acc[g.start as usize] {
        Acc::Short(k) => vec![(Item::Z(*k), 1)],
        Acc::Long { left, mid, right } => {
            let mut s = vec![(Item::Z(*left), 1)];
            for &(it, e) in mid {
                push_item(&mut s, it, e);
            }
            push_item(&mut s, Item::Z(*right), 1);
            s
        }
    };
    let start_var = b.var(start_items);
    // Assign terminal ids in increasing order of k.
    let mut zs: BTreeMap<u64, Sym> = BTreeMap::new();
    let mids = acc.iter().filter_map(|a| match a {
        Acc::Long { mid, .. } => Some(mid),
        Acc::Short(_) => None,
    });
    for rule in b.rules.iter().chain(mids) {
        for &(it, _) in rule {
            if let Item::Z(k) = it {
                zs.insert(k, 0);
            }
        }
    }
    let values: Vec<u64> = zs.keys().copied().collect();
    for (id, slot) in zs.values_mut().enumerate() {
        *slot = id as Sym;
    }
    let nt = values.len();
    let map = |it: Item| -> Sym {
        match it {
            Item::Z(k) => zs[&k],
            Item::V(v) => (nt + v) as Sym,
        }
    };
    let mut out = Grammar::with_terminals(nt, Flavor::Rlslg);
    for rule in &b.rules {
        let mut r = Vec::with_capacity(rule.len());
        for &(it, e) in rule {
            push_run(Flavor::Rlslg, &mut r, Run::new(map(it), e));
        }
        out.rules.push(r);
    }
    out.start = map(start_var);
    let shapes = acc
        .iter()
        .map(|a| match a {
            Acc::Short(k) => DfShape::Short { k: *k },
            Acc::Long { left, mid, right } => DfShape::Long {
                left: *left,
                mid: mid.first().map(|&(it, _)| map(it)),
                right: *right,
            },
        })
        .collect();
    Ok(DfGrammar { grammar: out, values, shapes })
}

/// `df` of an explicit text, with `one` marking ones.
pub fn df_of_text(text: &[Sym], one: Sym) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = 0u64;
    for &c in text {
        if c == one {
            out.push(k);
            k = 0;
        } else {
            k += 1;
        }
    }
    out.push(k);
    out
}

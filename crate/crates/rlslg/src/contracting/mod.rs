//! Contracting grammars: every variable child weighs at most half of its
//! parent (terminals are exempt).
//!
//! The construction follows heavy paths. Each variable is rewritten as its
//! left path context, the rule at the end of its heavy path, and its right
//! path context; the contexts come from [`prefix_grammar`] fragments.

mod forest;
mod prefix;

pub use forest::HeavyForest;
pub use prefix::{prefix_grammar, Fragment, Side};

use crate::error::Result;
use crate::grammar::{derive_stats, normalize, push_run, rle, Flavor, Grammar, Run, Sym};

/// A contracting grammar with the largest rle rule length it contains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractingGrammar {
    pub grammar: Grammar,
    pub d: usize,
}

/// Contracts `g` according to its flavor.
pub fn contract(g: &Grammar) -> Result<(ContractingGrammar, Vec<Sym>)> {
    match g.flavor {
        Flavor::Slg => contract_slg(g),
        Flavor::Rlslg => contract_rlslg(g),
    }
}

/// Contracts a plain SLG. The mapping sends every input symbol to an output
/// symbol with the same expansion.
pub fn contract_slg(g: &Grammar) -> Result<(ContractingGrammar, Vec<Sym>)> {
    let (n, map) = normalize(g)?;
    let (h, hmap) = contract_core(&n)?;
    let map = map.iter().map(|&s| hmap[s as usize]).collect();
    Ok((finish(h), map))
}

/// Contracts a run-length SLG.
///
/// Power variables `A -> B^k` are contracting by themselves (`k >= 2`), so they
/// are lifted to atoms, the remaining pair grammar is contracted, and the
/// powers are attached again. A power that ends up as a heavy child is
/// replaced by its run.
pub fn contract_rlslg(g: &Grammar) -> Result<(ContractingGrammar, Vec<Sym>)> {
    let (n, nmap) = normalize(g)?;
    let st = derive_stats(&n)?;
    let sigma = n.terminal_count();
    let nv = n.variable_count();
    // lifted ids: atoms for powers, fresh ids for pair variables
    let powers: Vec<usize> = (0..nv).filter(|&v| n.rules[v].len() == 1).collect();
    let mut lift = vec![0 as Sym; n.symbol_count()];
    let mut lifted_weights = n.terminal_weights.clone();
    for (t, l) in lift.iter_mut().enumerate().take(sigma) {
        *l = t as Sym;
    }
    for &v in &powers {
        lift[sigma + v] = lifted_weights.len() as Sym;
        lifted_weights.push(st.weight[sigma + v]);
    }
    let atoms = lifted_weights.len();
    let mut lifted = Grammar { terminal_weights: lifted_weights, rules: Vec::new(), start: 0, flavor: Flavor::Slg };
    let mut pair_vars = Vec::new();
    for v in 0..nv {
        if n.rules[v].len() != 1 {
            lift[sigma + v] = (atoms + pair_vars.len()) as Sym;
            pair_vars.push(v);
        }
    }
    for &v in &pair_vars {
        lifted.rules.push(n.rules[v].iter().map(|r| Run::one(lift[r.sym as usize])).collect());
    }
    lifted.start = lift[n.start as usize];
    let (hc, hmap) = contract_core(&lifted)?;

    // output ids: terminals, contracted variables, then powers
    let hv = hc.variable_count();
    let power_base = sigma + hv;
    let mut power_id = vec![0 as Sym; atoms];
    for (i, _) in powers.iter().enumerate() {
        power_id[sigma + i] = (power_base + i) as Sym;
    }
    let conv = |s: Sym| -> Sym {
        let s = s as usize;
        if s < sigma {
            s as Sym
        } else if s < atoms {
            power_id[s]
        } else {
            (s - atoms + sigma) as Sym
        }
    };
    let to_out = |s: Sym| -> Sym {
        // input-normal symbol to output symbol
        let l = lift[s as usize];
        if (l as usize) < atoms {
            conv(l)
        } else {
            conv(hmap[l as usize])
        }
    };
    let mut out = Grammar::with_terminals(sigma, Flavor::Rlslg);
    out.terminal_weights = n.terminal_weights.clone();
    for rule in &hc.rules {
        out.rules.push(rule.iter().map(|r| Run::one(conv(r.sym))).collect());
    }
    let mut power_rules = Vec::with_capacity(powers.len());
    for &v in &powers {
        let r = n.rules[v][0];
        power_rules.push(Run::new(to_out(r.sym), r.exp));
    }
    for r in &power_rules {
        out.rules.push(vec![*r]);
    }
    let ost = weights_of(&out);
    for v in 0..hv {
        let wa = ost[sigma + v] as u128;
        let mut rule = Vec::with_capacity(out.rules[v].len());
        for &r in &out.rules[v] {
            let s = r.sym as usize;
            if s >= power_base && 2 * ost[s] as u128 * r.exp as u128 > wa && r.exp == 1 {
                push_run(Flavor::Rlslg, &mut rule, power_rules[s - power_base]);
            } else {
                push_run(Flavor::Rlslg, &mut rule, r);
            }
        }
        out.rules[v] = rule;
    }
    out.start = to_out(n.start);
    let map = nmap.iter().map(|&s| to_out(s)).collect();
    Ok((finish(out), map))
}

fn weights_of(g: &Grammar) -> Vec<u64> {
    derive_stats(g).map(|s| s.weight).unwrap_or_default()
}

fn finish(g: Grammar) -> ContractingGrammar {
    let d = rule_bound(&g);
    ContractingGrammar { grammar: g, d }
}

/// Largest rle length over all rules.
pub fn rule_bound(g: &Grammar) -> usize {
    g.rules.iter().map(|r| rle(r).len()).max().unwrap_or(0)
}

/// First `(parent, child)` pair where a variable child weighs more than half of
/// its parent, if any.
pub fn contracting_violation(g: &Grammar, weight: &[u64]) -> Option<(Sym, Sym)> {
    for v in 0..g.variable_count() {
        let a = g.var_sym(v);
        for r in &g.rules[v] {
            if !g.is_terminal(r.sym) && 2 * weight[r.sym as usize] as u128 > weight[a as usize] as u128 {
                return Some((a, r.sym));
            }
        }
    }
    None
}

/// Contracts an SLG whose rules all have exponent one. Terminals keep their
/// ids and so do input variables; fragment variables are appended.
fn contract_core(g: &Grammar) -> Result<(Grammar, Vec<Sym>)> {
    let st = derive_stats(g)?;
    let t = g.terminal_count();
    let nv = g.variable_count();
    let forest = HeavyForest::from_grammar(g, &st.weight, &st.order);
    let base = g.symbol_count() as u32;
    let left = prefix_grammar(&forest, &st.weight, base, Side::Left);
    let rbase = base + left.rules.len() as u32;
    let right = prefix_grammar(&forest, &st.weight, rbase, Side::Right);
    let roots = forest.roots();

    let mut weight = st.weight.clone();
    weight.extend_from_slice(&left.weights);
    weight.extend_from_slice(&right.weights);

    // left fragment rules are reversed so they spell the context forwards
    let mut rules: Vec<Vec<Sym>> = Vec::with_capacity(nv + left.rules.len() + right.rules.len());
    for v in 0..nv {
        let mut rule = Vec::new();
        if let Some(p) = left.node_item[v] {
            if left.is_var(p) {
                rule.extend(left.rule(p).iter().rev());
            } else {
                rule.push(p);
            }
        }
        rule.extend(g.rules[roots[v] as usize].iter().map(|r| r.sym));
        if let Some(s) = right.node_item[v] {
            if right.is_var(s) {
                rule.extend_from_slice(right.rule(s));
            } else {
                rule.push(s);
            }
        }
        rules.push(rule);
    }
    for r in &left.rules {
        rules.push(r.iter().rev().copied().collect());
    }
    for r in &right.rules {
        rules.push(r.clone());
    }

    // one inlining step against the rules above
    let mut fixed = Vec::with_capacity(rules.len());
    for (i, rule) in rules.iter().enumerate() {
        let wa = weight[t + i] as u128;
        let mut out = Vec::with_capacity(rule.len());
        for &c in rule {
            if c as usize >= t && 2 * weight[c as usize] as u128 > wa {
                out.extend_from_slice(&rules[c as usize - t]);
            } else {
                out.push(c);
            }
        }
        fixed.push(out.into_iter().map(Run::one).collect());
    }
    let h = Grammar { terminal_weights: g.terminal_weights.clone(), rules: fixed, start: g.start, flavor: Flavor::Slg };
    Ok((h, (0..g.symbol_count() as Sym).collect()))
}

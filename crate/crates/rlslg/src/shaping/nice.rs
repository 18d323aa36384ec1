use super::Tau;
use crate::contracting::ContractingGrammar;
use crate::error::{Error, Result};
use crate::grammar::{derive_stats, push_run, rle, Grammar, Run, Sym};

/// A grammar whose start is `tau_root`-nice and whose other variables are
/// `tau_var`-nice for the rule bound `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceGrammar {
    pub grammar: Grammar,
    pub tau_root: Tau,
    pub tau_var: Tau,
    pub d: usize,
}

/// Which niceness condition failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NiceViolation {
    /// A variable child is heavy.
    HeavyChild(Sym),
    /// The rule has too many runs.
    LongRule { runs: usize },
    /// A light window starting at run `at` covers too many runs.
    DenseWindow { at: usize, runs: usize },
}

/// Rule of `a` with every child heavier than `weight(a) / tau` replaced by its
/// own rule, repeatedly. `g` must be contracting for this to terminate.
pub fn make_nice_rhs(g: &Grammar, weight: &[u64], a: Sym, tau: Tau) -> Vec<Run> {
    let wa = weight[a as usize];
    let mut out: Vec<Run> = Vec::new();
    let mut stack: Vec<Run> = g.rule(a).iter().rev().copied().collect();
    while let Some(r) = stack.pop() {
        if !g.is_terminal(r.sym) && tau.is_heavy(weight[r.sym as usize], wa) {
            for _ in 0..r.exp {
                stack.extend(g.rule(r.sym).iter().rev());
            }
        } else {
            push_run(g.flavor, &mut out, r);
        }
    }
    out
}

/// Applies [`make_nice_rhs`] with `tau_root` at the start and `tau_var`
/// elsewhere. Symbol ids are unchanged, so the mapping is the identity.
pub fn make_nice(c: &ContractingGrammar, tau_root: Tau, tau_var: Tau) -> Result<(NiceGrammar, Vec<Sym>)> {
    if tau_root.num() * tau_var.den() < tau_var.num() * tau_root.den() {
        return Err(Error::InvalidParameter("tau_root must be at least tau_var".into()));
    }
    let g = &c.grammar;
    let st = derive_stats(g)?;
    let mut out = g.clone();
    for v in 0..g.variable_count() {
        let a = g.var_sym(v);
        let tau = if a == g.start { tau_root } else { tau_var };
        out.rules[v] = make_nice_rhs(g, &st.weight, a, tau);
    }
    let map = (0..g.symbol_count() as Sym).collect();
    Ok((NiceGrammar { grammar: out, tau_root, tau_var, d: c.d }, map))
}

/// Checks conditions (1)-(3) for variable `a` literally.
pub fn nice_violation(g: &Grammar, weight: &[u64], a: Sym, tau: Tau, d: usize) -> Option<NiceViolation> {
    let wa = weight[a as usize];
    let runs = rle(g.rule(a));
    for r in &runs {
        if !g.is_terminal(r.sym) && tau.is_heavy(weight[r.sym as usize], wa) {
            return Some(NiceViolation::HeavyChild(r.sym));
        }
    }
    let m = runs.len();
    if m as u128 * tau.den() > 2 * d as u128 * tau.num() {
        return Some(NiceViolation::LongRule { runs: m });
    }
    // the lightest substring touching runs j..=k takes one copy of each end run
    let cap = 2 * d * tau.ceil_log2() as usize;
    let w: Vec<u128> = runs.iter().map(|r| weight[r.sym as usize] as u128).collect();
    let mut pre = vec![0u128; m + 1];
    for t in 0..m {
        pre[t + 1] = pre[t] + runs[t].exp as u128 * w[t];
    }
    let min_weight = |j: usize, k: usize| if j == k { w[j] } else { w[j] + pre[k] - pre[j + 1] + w[k] };
    let light = |x: u128| x * tau.num() <= wa as u128 * tau.den();
    let mut k = 0usize;
    for j in 0..m {
        k = k.max(j);
        if !light(w[j]) {
            continue;
        }
        while k + 1 < m && light(min_weight(j, k + 1)) {
            k += 1;
        }
        if k - j + 1 > cap {
            return Some(NiceViolation::DenseWindow { at: j, runs: k - j + 1 });
        }
    }
    None
}

/// Checks every variable of a nice grammar; returns the first offender.
pub fn check_nice(ng: &NiceGrammar) -> std::result::Result<(), (Sym, NiceViolation)> {
    let g = &ng.grammar;
    let st = derive_stats(g).map_err(|_| (g.start, NiceViolation::LongRule { runs: 0 }))?;
    for v in 0..g.variable_count() {
        let a = g.var_sym(v);
        let tau = if a == g.start { ng.tau_root } else { ng.tau_var };
        if let Some(bad) = nice_violation(g, &st.weight, a, tau, ng.d) {
            return Err((a, bad));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contracting::contract;
    use crate::corpus;
    use crate::grammar::{expand, parse_text};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn naive_window_ok(g: &Grammar, weight: &[u64], a: Sym, tau: Tau, d: usize) -> bool {
        // every substring of the expanded rule, by brute force
        let flat: Vec<Sym> = g.rule(a).iter().flat_map(|r| std::iter::repeat(r.sym).take(r.exp as usize)).collect();
        let cap = 2 * d * tau.ceil_log2() as usize;
        for i in 0..flat.len() {
            let mut w = 0u64;
            for j in i..flat.len() {
                w += weight[flat[j] as usize];
                if !tau.fits(w, weight[a as usize]) {
                    break;
                }
                let runs = rle(&flat[i..=j].iter().map(|&s| Run::one(s)).collect::<Vec<_>>()).len();
                if runs > cap {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn small_tau_keeps_rules() {
        let g = parse_text("start: S\nA -> 'a' 'b'\nB -> A 'c'\nS -> B A\n").unwrap();
        let (c, _) = contract(&g).unwrap();
        let t = Tau::new(2.0).unwrap();
        let (n, _) = make_nice(&c, t, t).unwrap();
        assert_eq!(n.grammar, c.grammar);
    }

    #[test]
    fn both_children_inlined_once() {
        // A -> B C with B -> D E, C -> D' E', all leaves of weight 2
        let g = parse_text("start: A\nweights: 'd'=2, 'e'=2, 'f'=2, 'g'=2\nB -> 'd' 'e'\nC -> 'f' 'g'\nA -> B C\n").unwrap();
        let (c, _) = contract(&g).unwrap();
        let st = derive_stats(&c.grammar).unwrap();
        let rhs = make_nice_rhs(&c.grammar, &st.weight, c.grammar.start, Tau::new(4.0).unwrap());
        let syms: Vec<Sym> = rhs.iter().map(|r| r.sym).collect();
        assert_eq!(syms, vec!['d' as u32, 'e' as u32, 'f' as u32, 'g' as u32]);
    }

    #[test]
    fn random_grammars_become_nice() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for i in 0..60 {
            let g = if i % 2 == 0 {
                corpus::random_rlslg(&mut rng, 3, 30, 4, i % 3 == 0, 3000)
            } else {
                corpus::random_slg(&mut rng, 2, 30, 3, i % 3 == 0, 3000)
            };
            let (c, map) = contract(&g).unwrap();
            for tau in [2.0, 4.0, 16.0, 256.0, 3.5] {
                let t = Tau::new(tau).unwrap();
                let (n, _) = make_nice(&c, t.scaled(3), t).unwrap();
                assert_eq!(check_nice(&n), Ok(()));
                let st = derive_stats(&n.grammar).unwrap();
                for v in 0..n.grammar.variable_count() {
                    let a = n.grammar.var_sym(v);
                    let ta = if a == n.grammar.start { n.tau_root } else { n.tau_var };
                    assert!(naive_window_ok(&n.grammar, &st.weight, a, ta, n.d));
                }
                assert_eq!(n.grammar.start, map[g.start as usize]);
                assert_eq!(expand(&n.grammar, n.grammar.start, 1 << 20).unwrap(), expand(&g, g.start, 1 << 20).unwrap());
            }
        }
    }
}

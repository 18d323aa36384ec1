//! Weighted straight-line grammars, plain and run-length encoded.
//!
//! Symbols are dense `u32` ids. Terminals occupy `[0, terminal_count)` and
//! variables follow; variable `v` has id `terminal_count + v`.

mod binary;
mod builder;
mod expand;
mod normalize;
mod prune;
mod stats;
mod text;

pub use binary::{read_binary, write_binary};
pub use builder::trivial_builder;
pub use expand::{expand, expand_all, extract_substring, parse_tree_nodes, ParseNode, DEFAULT_EXPAND_CAP};
pub use normalize::{is_normal_form, normalize};
pub use prune::simplify;
pub use stats::{derive_stats, derive_stats_capped, topo_order, Stats};
pub use text::{parse_text, write_text};

use crate::error::{Error, Result};

/// A symbol id.
pub type Sym = u32;

/// One run `sym^exp` of a right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Run {
    pub sym: Sym,
    pub exp: u64,
}

impl Run {
    pub fn new(sym: Sym, exp: u64) -> Self {
        Run { sym, exp }
    }
    pub fn one(sym: Sym) -> Self {
        Run { sym, exp: 1 }
    }
}

/// Plain SLG (every exponent is 1) or run-length SLG.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    Slg,
    Rlslg,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Grammar {
    pub terminal_weights: Vec<u64>,
    pub rules: Vec<Vec<Run>>,
    pub start: Sym,
    pub flavor: Flavor,
}

impl Grammar {
    /// Grammar with `sigma` unit-weight terminals and no rules yet.
    pub fn with_terminals(sigma: usize, flavor: Flavor) -> Self {
        Grammar { terminal_weights: vec![1; sigma], rules: Vec::new(), start: 0, flavor }
    }

    pub fn terminal_count(&self) -> usize {
        self.terminal_weights.len()
    }

    pub fn symbol_count(&self) -> usize {
        self.terminal_weights.len() + self.rules.len()
    }

    pub fn variable_count(&self) -> usize {
        self.rules.len()
    }

    #[inline]
    pub fn is_terminal(&self, s: Sym) -> bool {
        (s as usize) < self.terminal_weights.len()
    }

    #[inline]
    pub fn var_sym(&self, v: usize) -> Sym {
        (self.terminal_weights.len() + v) as Sym
    }

    /// Rule of variable `s`. Panics on terminals.
    #[inline]
    pub fn rule(&self, s: Sym) -> &[Run] {
        &self.rules[s as usize - self.terminal_weights.len()]
    }

    #[inline]
    pub fn rule_mut(&mut self, s: Sym) -> &mut Vec<Run> {
        let t = self.terminal_weights.len();
        &mut self.rules[s as usize - t]
    }

    /// Appends a variable and returns its id.
    pub fn push_rule(&mut self, runs: Vec<Run>) -> Sym {
        self.rules.push(runs);
        (self.terminal_weights.len() + self.rules.len() - 1) as Sym
    }

    /// `|G|`: total number of stored runs over all rules.
    pub fn size(&self) -> usize {
        self.rules.iter().map(|r| r.len()).sum()
    }

    /// True when every terminal has weight one.
    pub fn is_unweighted(&self) -> bool {
        self.terminal_weights.iter().all(|&w| w == 1)
    }

    /// Appends a run, merging with the previous one for run-length grammars.
    pub fn push_run(&self, out: &mut Vec<Run>, run: Run) {
        push_run(self.flavor, out, run)
    }

    /// Checks every structural invariant; reports the first violation.
    pub fn validate(&self) -> Result<()> {
        let n = self.symbol_count() as u64;
        for (t, &w) in self.terminal_weights.iter().enumerate() {
            if w == 0 {
                return Err(Error::ZeroWeight { sym: t as Sym });
            }
        }
        if (self.start as u64) >= n {
            return Err(Error::UnknownSymbol { sym: self.start });
        }
        for v in 0..self.rules.len() {
            let var = self.var_sym(v);
            let rule = &self.rules[v];
            if rule.is_empty() {
                if var == self.start {
                    return Err(Error::EmptyStartExpansion);
                }
                return Err(Error::EmptyRule { var });
            }
            for (i, run) in rule.iter().enumerate() {
                if (run.sym as u64) >= n {
                    return Err(Error::UnknownSymbol { sym: run.sym });
                }
                if run.exp == 0 {
                    return Err(Error::ZeroExponent { var });
                }
                match self.flavor {
                    Flavor::Slg => {
                        if run.exp != 1 {
                            return Err(Error::ExponentInSLG { var });
                        }
                    }
                    Flavor::Rlslg => {
                        if i > 0 && rule[i - 1].sym == run.sym {
                            return Err(Error::NonCanonicalRun { var });
                        }
                    }
                }
            }
        }
        topo_order(self).map(|_| ())
    }
}

/// Appends `run` to `out`, merging equal neighbours when `flavor` is run-length.
pub fn push_run(flavor: Flavor, out: &mut Vec<Run>, run: Run) {
    if run.exp == 0 {
        return;
    }
    if flavor == Flavor::Rlslg {
        if let Some(last) = out.last_mut() {
            if last.sym == run.sym {
                last.exp += run.exp;
                return;
            }
        }
    }
    if flavor == Flavor::Slg && run.exp > 1 {
        for _ in 0..run.exp {
            out.push(Run::one(run.sym));
        }
        return;
    }
    out.push(run);
}

/// Run-length encoding of a rule (merges equal neighbours regardless of flavor).
pub fn rle(rule: &[Run]) -> Vec<Run> {
    let mut out: Vec<Run> = Vec::with_capacity(rule.len());
    for &r in rule {
        push_run(Flavor::Rlslg, &mut out, r);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abab() -> Grammar {
        // terminals a=0, b=1; A=2 -> a b; S=3 -> A A
        let mut g = Grammar::with_terminals(2, Flavor::Slg);
        let a = g.push_rule(vec![Run::one(0), Run::one(1)]);
        g.start = g.push_rule(vec![Run::one(a), Run::one(a)]);
        g
    }

    #[test]
    fn smallest_grammar_validates() {
        assert_eq!(abab().validate(), Ok(()));
    }

    #[test]
    fn two_cycle_is_rejected() {
        let mut g = Grammar::with_terminals(1, Flavor::Slg);
        g.rules = vec![vec![Run::one(2)], vec![Run::one(1)]];
        g.start = 1;
        assert!(matches!(g.validate(), Err(Error::CyclicGrammar { .. })));
    }

    #[test]
    fn adjacent_equal_runs_rejected() {
        let mut g = Grammar::with_terminals(2, Flavor::Rlslg);
        g.start = g.push_rule(vec![Run::new(1, 2), Run::new(1, 1)]);
        assert_eq!(g.validate(), Err(Error::NonCanonicalRun { var: 2 }));
    }

    #[test]
    fn exponent_in_slg_rejected() {
        let mut g = Grammar::with_terminals(2, Flavor::Slg);
        g.start = g.push_rule(vec![Run::new(1, 3)]);
        assert_eq!(g.validate(), Err(Error::ExponentInSLG { var: 2 }));
    }

    #[test]
    fn empty_start_rejected() {
        let mut g = Grammar::with_terminals(2, Flavor::Slg);
        g.start = g.push_rule(vec![]);
        assert_eq!(g.validate(), Err(Error::EmptyStartExpansion));
    }

    #[test]
    fn push_run_merges_only_for_rlslg() {
        let mut v = Vec::new();
        push_run(Flavor::Rlslg, &mut v, Run::one(3));
        push_run(Flavor::Rlslg, &mut v, Run::new(3, 4));
        assert_eq!(v, vec![Run::new(3, 5)]);
        let mut w = Vec::new();
        push_run(Flavor::Slg, &mut w, Run::one(3));
        push_run(Flavor::Slg, &mut w, Run::new(3, 2));
        assert_eq!(w.len(), 3);
    }
}

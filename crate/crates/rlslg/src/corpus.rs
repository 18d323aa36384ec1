//! Generators for test and benchmark grammars.

use crate::grammar::{push_run, trivial_builder, Flavor, Grammar, Run, Sym};
use rand::Rng;

fn random_grammar<R: Rng>(rng: &mut R, flavor: Flavor, sigma: usize, nvars: usize, max_rule: usize, weighted: bool, max_len: u64) -> Grammar {
    let sigma = sigma.max(1);
    let mut g = Grammar::with_terminals(sigma, flavor);
    if weighted {
        for w in g.terminal_weights.iter_mut() {
            *w = rng.gen_range(1..=5);
        }
    }
    let mut len: Vec<u64> = vec![1; sigma];
    for _ in 0..nvars.max(1) {
        let k = rng.gen_range(1..=max_rule.max(1));
        let mut rule = Vec::new();
        let mut total = 0u64;
        for _ in 0..k {
            let nsym = g.symbol_count();
            // prefer recent variables so grammars get deep
            let mut s = if nsym > sigma && rng.gen_bool(0.7) {
                let lo = sigma.max(nsym.saturating_sub(8));
                rng.gen_range(lo..nsym)
            } else {
                rng.gen_range(0..nsym)
            };
            if total + len[s] > max_len {
                if !rule.is_empty() {
                    break;
                }
                s = rng.gen_range(0..sigma);
            }
            let mut e = 1;
            if flavor == Flavor::Rlslg && rng.gen_bool(0.3) {
                e = rng.gen_range(2..=5u64);
                while e > 1 && total + e * len[s] > max_len {
                    e -= 1;
                }
            }
            total += e * len[s];
            push_run(flavor, &mut rule, Run::new(s as Sym, e));
        }
        len.push(total);
        g.start = g.push_rule(rule);
    }
    g
}

/// Random SLG whose start expands to at most about `max_len` characters.
pub fn random_slg<R: Rng>(rng: &mut R, sigma: usize, nvars: usize, max_rule: usize, weighted: bool, max_len: u64) -> Grammar {
    random_grammar(rng, Flavor::Slg, sigma, nvars, max_rule, weighted, max_len)
}

/// Random RLSLG; about a third of the runs are powers.
pub fn random_rlslg<R: Rng>(rng: &mut R, sigma: usize, nvars: usize, max_rule: usize, weighted: bool, max_len: u64) -> Grammar {
    random_grammar(rng, Flavor::Rlslg, sigma, nvars, max_rule, weighted, max_len)
}

/// Fibonacci word: `F1 = b`, `F2 = a`, `Fk = F(k-1) F(k-2)`, over terminals 0 and 1.
pub fn fibonacci(k: usize) -> Grammar {
    let mut g = Grammar::with_terminals(2, Flavor::Slg);
    let (mut prev, mut cur): (Sym, Sym) = (1, 0);
    for _ in 2..k.max(2) {
        let next = g.push_rule(vec![Run::one(cur), Run::one(prev)]);
        prev = cur;
        cur = next;
    }
    g.start = cur;
    if g.rules.is_empty() {
        g.start = g.push_rule(vec![Run::one(0), Run::one(1)]);
    }
    g
}

/// Thue–Morse prefix of length `2^k` over terminals 0 and 1.
pub fn thue_morse(k: usize) -> Grammar {
    let mut g = Grammar::with_terminals(2, Flavor::Slg);
    let (mut a, mut b): (Sym, Sym) = (0, 1);
    for _ in 0..k.max(1) {
        let na = g.push_rule(vec![Run::one(a), Run::one(b)]);
        let nb = g.push_rule(vec![Run::one(b), Run::one(a)]);
        a = na;
        b = nb;
    }
    g.start = a;
    g
}

/// Balanced grammar of a random text with `sigma` letters.
pub fn random_text<R: Rng>(rng: &mut R, sigma: usize, n: usize) -> Grammar {
    let mut t: Vec<Sym> = (0..n.max(1)).map(|_| rng.gen_range(0..sigma.max(1)) as Sym).collect();
    t[0] = (sigma.max(1) - 1) as Sym;
    trivial_builder(&t).expect("non-empty text")
}

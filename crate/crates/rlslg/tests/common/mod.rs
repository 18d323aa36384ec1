//! Naive oracles shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rlslg::access::{build_index, AccessIndex, BuildConfig, Route};
use rlslg::aggregates::{weight_phi, AggregateIndex, CappedSum, RankSelect};
use rlslg::grammar::expand;
use rlslg::traversal::Traversal;
use rlslg::{Grammar, Sym};

pub const EXPAND_CAP: u64 = 1 << 22;

/// The expanded text with weight prefix sums and occurrence lists.
pub struct Oracle {
    pub text: Vec<Sym>,
    pub cum: Vec<u64>,
    pub occ: Vec<Vec<u64>>,
}

impl Oracle {
    pub fn new(g: &Grammar) -> Oracle {
        let text = expand(g, g.start, EXPAND_CAP).expect("expandable");
        let mut cum = Vec::with_capacity(text.len() + 1);
        cum.push(0u64);
        for &c in &text {
            cum.push(cum.last().unwrap() + g.terminal_weights[c as usize]);
        }
        let mut occ = vec![Vec::new(); g.terminal_count()];
        for (i, &c) in text.iter().enumerate() {
            occ[c as usize].push(i as u64);
        }
        Oracle { text, cum, occ }
    }

    pub fn len(&self) -> u64 {
        self.text.len() as u64
    }

    pub fn weight(&self) -> u64 {
        *self.cum.last().unwrap()
    }

    /// Character index covering weighted position `i`.
    pub fn char_at_weight(&self, i: u64) -> usize {
        self.cum.partition_point(|&c| c <= i) - 1
    }

    pub fn rank(&self, c: Sym, i: u64) -> u64 {
        self.occ[c as usize].partition_point(|&p| p < i) as u64
    }
}

/// Counts from one oracle run.
#[derive(Debug, Default, Clone)]
pub struct Outcome {
    pub queries: u64,
    pub mismatches: Vec<String>,
    pub over_bound: u64,
    pub max_steps: u32,
}

impl Outcome {
    fn bad(&mut self, msg: String) {
        if self.mismatches.len() < 8 {
            self.mismatches.push(msg);
        } else if self.mismatches.len() == 8 {
            self.mismatches.push("...".into());
        }
    }

    pub fn merge(&mut self, o: Outcome) {
        self.queries += o.queries;
        self.over_bound += o.over_bound;
        self.max_steps = self.max_steps.max(o.max_steps);
        for m in o.mismatches {
            self.bad(m);
        }
    }
}

fn positions(rng: &mut ChaCha8Rng, n: u64, exhaustive: u64, samples: u64) -> Vec<u64> {
    if n <= exhaustive {
        (0..n).collect()
    } else {
        (0..samples).map(|_| rng.gen_range(0..n)).collect()
    }
}

/// Access on every route, prefix sums, extract, rank and select against the
/// expanded text. Every position when the text is at most `exhaustive`
/// long, `samples` random ones per query type otherwise.
pub fn check_index(g: &Grammar, ix: &AccessIndex, rng: &mut ChaCha8Rng, exhaustive: u64, samples: u64) -> Outcome {
    let o = Oracle::new(g);
    let mut out = Outcome::default();
    let n = o.len();
    assert_eq!(ix.len(), n);
    assert_eq!(ix.weight(), o.weight());

    let wpos = positions(rng, o.weight(), exhaustive, samples);
    let mut routes = vec![Route::Weighted];
    if ix.leafy().is_some() {
        routes.push(Route::Leafy);
    }
    if ix.explicit().is_some() {
        routes.push(Route::Explicit);
    }
    for route in routes {
        let mut r = ix.clone();
        r.set_route(route).unwrap();
        for &i in &wpos {
            out.queries += 1;
            let (hit, steps) = r.access_traced(i).unwrap();
            let j = o.char_at_weight(i);
            if (hit.terminal, hit.pos, hit.offset) != (o.text[j], j as u64, o.cum[j]) {
                out.bad(format!("access {i} on {route:?}: {hit:?}"));
            }
            if !r.steps_within_bound(steps) {
                out.over_bound += 1;
            }
            out.max_steps = out.max_steps.max(steps);
        }
    }

    let agg = AggregateIndex::new(ix, CappedSum::new(u64::MAX), &weight_phi(&g.terminal_weights)).unwrap();
    for &i in &wpos {
        out.queries += 1;
        let got = agg.prefix_sum(i).unwrap();
        if got != o.cum[o.char_at_weight(i)] {
            out.bad(format!("prefix_sum {i}: {got}"));
        }
    }

    let tr = Traversal::new(ix).unwrap();
    for &i in &positions(rng, n, exhaustive, samples) {
        out.queries += 1;
        let m = rng.gen_range(0..=(n - i).min(64));
        if tr.extract(i, m).unwrap() != o.text[i as usize..(i + m) as usize] {
            out.bad(format!("extract {i} {m}"));
        }
    }

    let present: Vec<Sym> = (0..g.terminal_count() as Sym).filter(|&c| !o.occ[c as usize].is_empty()).collect();
    let rs = RankSelect::new(ix);
    let rank_one = |out: &mut Outcome, c: Sym, j: u64| {
        out.queries += 1;
        let got = rs.rank(c, j).unwrap();
        if got != o.rank(c, j) {
            out.bad(format!("rank {c} {j}: {got}"));
        }
    };
    if n <= exhaustive {
        for &c in &present {
            for j in 0..=n {
                rank_one(&mut out, c, j);
            }
        }
    } else {
        for _ in 0..samples {
            let c = present[rng.gen_range(0..present.len())];
            rank_one(&mut out, c, rng.gen_range(0..=n));
        }
    }
    let select_one = |out: &mut Outcome, c: Sym, r: u64| {
        out.queries += 1;
        let got = rs.select(c, r).unwrap();
        if got != o.occ[c as usize][r as usize] {
            out.bad(format!("select {c} {r}: {got}"));
        }
    };
    if n <= exhaustive {
        for &c in &present {
            for r in 0..o.occ[c as usize].len() as u64 {
                select_one(&mut out, c, r);
            }
        }
    } else {
        for _ in 0..samples {
            let c = present[rng.gen_range(0..present.len())];
            select_one(&mut out, c, rng.gen_range(0..o.occ[c as usize].len() as u64));
        }
    }
    out
}

pub fn check_grammar(g: &Grammar, cfg: &BuildConfig, rng: &mut ChaCha8Rng, exhaustive: u64, samples: u64) -> Outcome {
    let ix = build_index(g, cfg).unwrap();
    check_index(g, &ix, rng, exhaustive, samples)
}

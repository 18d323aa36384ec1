//! Oracle suite: every query type against the expanded text.

use crate::CliError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rlslg::access::{AccessIndex, Route};
use rlslg::aggregates::{weight_phi, AggregateIndex, CappedSum, RankSelect};
use rlslg::grammar::{expand, Sym};
use rlslg::traversal::Traversal;

/// Largest text expanded for checking.
pub const EXPAND_CAP: u64 = 1 << 26;

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Check every position when the text is at most this long.
    pub exhaustive: u64,
    /// Random positions per query type otherwise.
    pub samples: u64,
    pub seed: u64,
}

/// Checked count and mismatches per query type.
#[derive(Debug, Clone, Default)]
pub struct Tally {
    pub rows: Vec<(String, u64, u64)>,
}

impl Tally {
    fn add(&mut self, name: &str, checked: u64, bad: u64) {
        self.rows.push((name.to_string(), checked, bad));
    }

    pub fn mismatches(&self) -> u64 {
        self.rows.iter().map(|r| r.2).sum()
    }
}

fn positions(rng: &mut ChaCha8Rng, n: u64, opts: &VerifyOptions) -> Vec<u64> {
    if n <= opts.exhaustive {
        (0..n).collect()
    } else {
        (0..opts.samples).map(|_| rng.gen_range(0..n)).collect()
    }
}

pub fn verify_index(ix: &AccessIndex, opts: &VerifyOptions) -> Result<Tally, CliError> {
    let g = ix.weighted().grammar();
    let text = expand(g, g.start, EXPAND_CAP)?;
    let n = text.len() as u64;
    let mut cum = Vec::with_capacity(text.len() + 1);
    cum.push(0u64);
    for &c in &text {
        cum.push(cum.last().unwrap() + g.terminal_weights[c as usize]);
    }
    let total = *cum.last().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut tally = Tally::default();

    let report = ix.report();
    let mut sparse = report.weighted.sparsity_violations as u64;
    if let Some(l) = &report.leafy {
        sparse += l.top.sparsity_violations as u64;
    }
    tally.add("bucket-sparsity", 1, sparse);

    let wpos = positions(&mut rng, total, opts);
    let mut routes = vec![Route::Weighted];
    if ix.leafy().is_some() {
        routes.push(Route::Leafy);
    }
    if ix.explicit().is_some() {
        routes.push(Route::Explicit);
    }
    for route in routes {
        let mut r = ix.clone();
        r.set_route(route)?;
        let (mut bad, mut over) = (0, 0);
        for &i in &wpos {
            let (hit, steps) = r.access_traced(i)?;
            let j = cum.partition_point(|&c| c <= i) - 1;
            if (hit.terminal, hit.pos, hit.offset) != (text[j], j as u64, cum[j]) {
                bad += 1;
            }
            if !r.steps_within_bound(steps) {
                over += 1;
            }
        }
        tally.add(&format!("access-{}", route.name()), wpos.len() as u64, bad);
        tally.add(&format!("depth-bound-{}", route.name()), wpos.len() as u64, over);
    }

    let agg = AggregateIndex::new(ix, CappedSum::new(u64::MAX), &weight_phi(&g.terminal_weights))?;
    let mut bad = 0;
    for &i in &wpos {
        let j = cum.partition_point(|&c| c <= i) - 1;
        if agg.prefix_sum(i)? != cum[j] {
            bad += 1;
        }
    }
    tally.add("prefix-sum", wpos.len() as u64, bad);

    let tr = Traversal::new(ix)?;
    let cpos = positions(&mut rng, n, opts);
    let mut bad = 0;
    for &i in &cpos {
        let m = rng.gen_range(0..=(n - i).min(64));
        if tr.extract(i, m)? != text[i as usize..(i + m) as usize] {
            bad += 1;
        }
    }
    tally.add("extract", cpos.len() as u64, bad);

    let mut occ: Vec<Vec<u64>> = vec![Vec::new(); ix.sigma()];
    for (i, &c) in text.iter().enumerate() {
        occ[c as usize].push(i as u64);
    }
    let present: Vec<Sym> = (0..ix.sigma() as Sym).filter(|&c| !occ[c as usize].is_empty()).collect();
    let rs = RankSelect::new(ix);
    let (mut checked, mut bad) = (0u64, 0u64);
    let mut rank_one = |c: Sym, j: u64| -> Result<(), CliError> {
        checked += 1;
        if rs.rank(c, j)? != occ[c as usize].partition_point(|&p| p < j) as u64 {
            bad += 1;
        }
        Ok(())
    };
    if n <= opts.exhaustive {
        for &c in &present {
            for j in 0..=n {
                rank_one(c, j)?;
            }
        }
    } else {
        for _ in 0..opts.samples {
            let c = present[rng.gen_range(0..present.len())];
            rank_one(c, rng.gen_range(0..=n))?;
        }
    }
    tally.add("rank", checked, bad);

    let (mut checked, mut bad) = (0u64, 0u64);
    let mut select_one = |c: Sym, r: u64| -> Result<(), CliError> {
        checked += 1;
        if rs.select(c, r)? != occ[c as usize][r as usize] {
            bad += 1;
        }
        Ok(())
    };
    if n <= opts.exhaustive {
        for &c in &present {
            for r in 0..occ[c as usize].len() as u64 {
                select_one(c, r)?;
            }
        }
    } else {
        for _ in 0..opts.samples {
            let c = present[rng.gen_range(0..present.len())];
            select_one(c, rng.gen_range(0..occ[c as usize].len() as u64))?;
        }
    }
    tally.add("select", checked, bad);
    Ok(tally)
}

//! Trade-off measurements: index size and descent depth per tau.
//!
//! CSV schema, version 1. One header line, then one row per (file, tau):
//!
//! ```text
//! schema,file,n,g,sigma,tau,bits,mean_steps,ns_per_query
//! ```
//!
//! `n` is the text weight, `g` the input grammar size, `bits` the total
//! logical index size, `mean_steps` the mean number of child queries per
//! access and `ns_per_query` the mean wall time per access.

use crate::CliError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rlslg::access::{build_index, BuildConfig};
use rlslg::grammar::Grammar;
use std::time::Instant;

pub const SCHEMA: u32 = 1;
pub const HEADER: &str = "schema,file,n,g,sigma,tau,bits,mean_steps,ns_per_query";

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub file: String,
    pub n: u64,
    pub g: usize,
    pub sigma: usize,
    pub tau: f64,
    pub bits: u64,
    pub mean_steps: f64,
    pub ns_per_query: f64,
}

impl BenchRow {
    pub fn csv(&self) -> String {
        format!(
            "{SCHEMA},{},{},{},{},{},{},{:.4},{:.1}",
            self.file, self.n, self.g, self.sigma, self.tau, self.bits, self.mean_steps, self.ns_per_query
        )
    }
}

/// Builds one index per tau and measures `queries` random accesses.
pub fn bench_grammar(name: &str, g: &Grammar, taus: &[f64], queries: u64, leafy: bool, seed: u64) -> Result<Vec<BenchRow>, CliError> {
    let mut rows = Vec::with_capacity(taus.len());
    for &tau in taus {
        let cfg = BuildConfig { tau, leafy, ..Default::default() };
        let ix = build_index(g, &cfg)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = ix.weight();
        let qs: Vec<u64> = (0..queries).map(|_| rng.gen_range(0..w)).collect();
        let mut steps = 0u64;
        for &i in &qs {
            steps += ix.access_traced(i)?.1 as u64;
        }
        let t = Instant::now();
        let mut sink = 0u64;
        for &i in &qs {
            sink = sink.wrapping_add(ix.access(i)?.terminal as u64);
        }
        let ns = t.elapsed().as_nanos() as f64 / qs.len().max(1) as f64;
        std::hint::black_box(sink);
        rows.push(BenchRow {
            file: name.to_string(),
            n: w,
            g: g.size(),
            sigma: g.terminal_count(),
            tau,
            bits: ix.report().total_bits,
            mean_steps: steps as f64 / qs.len().max(1) as f64,
            ns_per_query: ns,
        });
    }
    Ok(rows)
}

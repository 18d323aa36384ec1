use crate::error::{Error, Result};
use crate::grammar::{Run, Sym};
use crate::shaping::Tau;
use crate::succinct::{bits_for, BucketStrategy, BucketedRank, IntVec};

/// Marks an absent start position in the start-annotation arrays.
pub(crate) const NONE: u64 = u64::MAX;

/// Rank structure over the inner run boundaries of one rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankTable {
    /// Run index for every offset `y` in `[0, weight)`.
    Direct(IntVec),
    Bucketed(BucketedRank),
}

/// The child located by a query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChildHit {
    pub sym: Sym,
    /// Weighted offset of the child in the whole string.
    pub offset: u64,
    /// Index of the run of the rule holding the child.
    pub run: usize,
    /// Which copy inside that run.
    pub copy: u64,
    pub weight: u64,
}

/// Constant-time child queries for one variable.
///
/// `pref[j]` is the weight of the first `j` runs. The rank table counts inner
/// boundaries `pref[1..m)` at or below an offset, which is the run index of
/// that offset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChildIndex {
    pub(crate) runs: Vec<Run>,
    pub(crate) pref: Vec<u64>,
    pub(crate) rank: RankTable,
    /// Characters of the underlying text in the first `j` runs; empty if unused.
    pub(crate) counts: Vec<u64>,
    /// Offset of the last marked position in the first `j` runs, or `NONE`;
    /// empty if unused.
    pub(crate) lasts: Vec<u64>,
}

impl ChildIndex {
    /// Builds the structure for a rule with the given symbol weights.
    ///
    /// A direct table is used when `tau >= weight`; otherwise a bucketed rank
    /// with buckets of `floor(weight / tau)` positions.
    pub fn build(runs: &[Run], weights: &[u64], tau: Tau, strategy: BucketStrategy) -> Result<ChildIndex> {
        if runs.is_empty() {
            return Err(Error::InvalidParameter("empty rule".into()));
        }
        let mut pref = Vec::with_capacity(runs.len() + 1);
        pref.push(0u64);
        for r in runs {
            let w = weights[r.sym as usize]
                .checked_mul(r.exp)
                .and_then(|x| x.checked_add(*pref.last().unwrap()))
                .ok_or(Error::Overflow { bits: 64 })?;
            pref.push(w);
        }
        let total = *pref.last().unwrap();
        let inner = &pref[1..runs.len()];
        let rank = if tau.num() >= total as u128 * tau.den() {
            let mut t = IntVec::with_len(bits_for(runs.len() as u64), total as usize);
            let mut j = 0usize;
            for y in 0..total {
                while j < inner.len() && inner[j] <= y {
                    j += 1;
                }
                t.set(y as usize, j as u64);
            }
            RankTable::Direct(t)
        } else {
            let s = tau.divide(total).max(1);
            RankTable::Bucketed(BucketedRank::build(inner, total, s, strategy)?)
        };
        Ok(ChildIndex { runs: runs.to_vec(), pref, rank, counts: Vec::new(), lasts: Vec::new() })
    }

    pub fn weight(&self) -> u64 {
        *self.pref.last().unwrap()
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn prefix_weights(&self) -> &[u64] {
        &self.pref
    }

    pub fn rank_table(&self) -> &RankTable {
        &self.rank
    }

    /// Index of the run containing offset `y` (relative to the rule start).
    #[inline]
    pub fn run_at(&self, y: u64) -> usize {
        match &self.rank {
            RankTable::Direct(t) => t.get(y as usize) as usize,
            RankTable::Bucketed(b) => b.rank(y + 1) as usize,
        }
    }

    /// The child of the node `(A, a)` covering weighted position `i`.
    #[inline]
    pub fn child(&self, a: u64, i: u64) -> Result<ChildHit> {
        let w = self.weight();
        if i < a || i - a >= w {
            return Err(Error::IndexOutOfNode { index: i, start: a, end: a.saturating_add(w) });
        }
        let y = i - a;
        let j = self.run_at(y);
        let r = self.runs[j];
        let wb = (self.pref[j + 1] - self.pref[j]) / r.exp;
        let copy = (y - self.pref[j]) / wb;
        Ok(ChildHit { sym: r.sym, offset: a + self.pref[j] + copy * wb, run: j, copy, weight: wb })
    }

    /// Largest number of boundaries in one bucket, 0 for direct tables.
    pub fn max_bucket_load(&self) -> usize {
        match &self.rank {
            RankTable::Direct(_) => 0,
            RankTable::Bucketed(b) => b.max_bucket_load(),
        }
    }

    /// Logical size in bits: runs, prefix weights, rank table and annotations.
    pub fn bits(&self) -> u64 {
        let m = self.runs.len() as u64;
        let wbits = bits_for(self.weight() + 1) as u64;
        let sym_bits = bits_for(self.runs.iter().map(|r| r.sym as u64).max().unwrap_or(0) + 1) as u64;
        let exp_bits = bits_for(self.runs.iter().map(|r| r.exp).max().unwrap_or(0) + 1) as u64;
        let rank = match &self.rank {
            RankTable::Direct(t) => t.bits(),
            RankTable::Bucketed(b) => b.bits(),
        };
        let ann = (self.counts.len() + self.lasts.len()) as u64 * wbits;
        m * (sym_bits + exp_bits) + (m + 1) * wbits + rank + ann
    }
}

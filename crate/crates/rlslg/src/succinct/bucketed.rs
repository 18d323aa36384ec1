//! Rank over a sparse set split into fixed-width buckets.
//!
//! Inside a bucket the structure scans its elements (or binary-searches them)
//! instead of using a fusion tree. Callers keep buckets small, so the scan
//! touches a bounded number of entries.

use super::bits_for;
use crate::error::{Error, Result};

/// How a query locates `y` among the elements of its bucket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum BucketStrategy {
    #[default]
    Scan,
    Binary,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BucketedRank {
    universe: u64,
    width: u64,
    elems: Vec<u64>,
    /// `pref[b]` = number of elements below `b * width`.
    pref: Vec<u32>,
    strategy: BucketStrategy,
}

impl BucketedRank {
    /// Builds over the sorted, distinct `xs` in `[0, universe)` with buckets of
    /// `width` positions.
    pub fn build(xs: &[u64], universe: u64, width: u64, strategy: BucketStrategy) -> Result<Self> {
        if width == 0 {
            return Err(Error::InvalidParameter("bucket width must be positive".into()));
        }
        if xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedInput);
        }
        if let Some(&last) = xs.last() {
            if last >= universe {
                return Err(Error::OutOfBounds { index: last, len: universe });
            }
        }
        // one extra bucket so rank(universe) needs no special case
        let nb = (universe / width + 1) as usize;
        let mut pref = vec![0u32; nb + 1];
        for &x in xs {
            pref[(x / width) as usize + 1] += 1;
        }
        for b in 0..nb {
            pref[b + 1] += pref[b];
        }
        Ok(BucketedRank { universe, width, elems: xs.to_vec(), pref, strategy })
    }

    /// `|{x : x < y}|` for `y` in `[0, universe]`.
    #[inline]
    pub fn rank(&self, y: u64) -> u64 {
        debug_assert!(y <= self.universe);
        let b = (y / self.width) as usize;
        let lo = self.pref[b] as usize;
        let hi = self.pref[b + 1] as usize;
        let bucket = &self.elems[lo..hi];
        let local = match self.strategy {
            BucketStrategy::Scan => bucket.iter().map(|&x| (x < y) as usize).sum::<usize>(),
            BucketStrategy::Binary => bucket.partition_point(|&x| x < y),
        };
        (lo + local) as u64
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn universe(&self) -> u64 {
        self.universe
    }

    pub fn bucket_width(&self) -> u64 {
        self.width
    }

    pub fn bucket_count(&self) -> usize {
        self.pref.len() - 1
    }

    /// Largest number of elements in one bucket.
    pub fn max_bucket_load(&self) -> usize {
        self.pref.windows(2).map(|w| (w[1] - w[0]) as usize).max().unwrap_or(0)
    }

    pub fn elements(&self) -> &[u64] {
        &self.elems
    }

    pub(crate) fn counters(&self) -> &[u32] {
        &self.pref
    }

    pub fn strategy(&self) -> BucketStrategy {
        self.strategy
    }

    /// Reassembles a structure from its stored arrays, checking their shape.
    pub(crate) fn from_parts(
        universe: u64,
        width: u64,
        elems: Vec<u64>,
        pref: Vec<u32>,
        strategy: BucketStrategy,
    ) -> Result<Self> {
        let ok = width > 0
            && pref.len() as u64 == universe / width + 2
            && pref.first() == Some(&0)
            && pref.windows(2).all(|w| w[0] <= w[1])
            && *pref.last().unwrap() as usize == elems.len();
        if !ok {
            return Err(Error::Format("bucketed rank arrays inconsistent".into()));
        }
        Ok(BucketedRank { universe, width, elems, pref, strategy })
    }

    /// Logical size: elements at `log u` bits, counters at `log |X|` bits.
    pub fn bits(&self) -> u64 {
        let ew = bits_for(self.universe) as u64;
        let pw = bits_for(self.elems.len() as u64 + 1) as u64;
        self.elems.len() as u64 * ew + self.pref.len() as u64 * pw
    }
}

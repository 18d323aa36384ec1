use super::{bits_for, BitVectorRS, IntVec};
use crate::error::{Error, Result};

/// Elias–Fano encoding of a sorted sequence with constant-time `select`.
///
/// Values are split into `low_bits` explicit low bits and a unary-coded
/// high part; `select(r)` finds the `r`-th one of the high part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliasFano {
    n: usize,
    universe: u64,
    low_bits: u32,
    lows: IntVec,
    highs: BitVectorRS,
}

impl EliasFano {
    /// Encodes `xs`, which must be nondecreasing and below `universe`.
    pub fn new(xs: &[u64], universe: u64) -> Result<Self> {
        if xs.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::UnsortedInput);
        }
        if let Some(&last) = xs.last() {
            if last >= universe {
                return Err(Error::OutOfBounds { index: last, len: universe });
            }
        }
        let n = xs.len();
        let low_bits = if n == 0 || universe <= n as u64 { 0 } else { 63 - (universe / n as u64).leading_zeros() };
        let mut lows = IntVec::with_len(low_bits.max(1), if low_bits == 0 { 0 } else { n });
        let high_len = n + (universe.saturating_sub(1) >> low_bits) as usize + 1;
        let mut pos = Vec::with_capacity(n);
        for (i, &x) in xs.iter().enumerate() {
            if low_bits > 0 {
                lows.set(i, x & ((1u64 << low_bits) - 1));
            }
            pos.push((x >> low_bits) + i as u64);
        }
        let highs = BitVectorRS::from_positions(high_len, &pos)?;
        Ok(EliasFano { n, universe, low_bits, lows, highs })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn universe(&self) -> u64 {
        self.universe
    }

    /// The `r`-th smallest element (0-based).
    #[inline]
    pub fn select(&self, r: u64) -> Result<u64> {
        if r >= self.n as u64 {
            return Err(Error::RankOutOfRange { rank: r, size: self.n as u64 });
        }
        let high = self.highs.select1(r)? - r;
        let low = if self.low_bits > 0 { self.lows.get(r as usize) } else { 0 };
        Ok(high << self.low_bits | low)
    }

    /// Size of the encoding: low bits, the unary high part and one select
    /// sample per 256 elements of the high part.
    pub fn bits(&self) -> u64 {
        let samples = (self.n as u64).div_ceil(256);
        self.lows.bits() + self.highs.len() as u64 + samples * bits_for(self.highs.len() as u64 + 1) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_readback() {
        let ef = EliasFano::new(&[1, 4, 9], 10).unwrap();
        assert_eq!(ef.select(1).unwrap(), 4);
        assert!(matches!(ef.select(3), Err(Error::RankOutOfRange { rank: 3, size: 3 })));
        assert_eq!(EliasFano::new(&[3, 1], 5), Err(Error::UnsortedInput));
    }

    #[test]
    fn random_round_trip_and_space() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let u = rng.gen_range(1..1_000_000u64);
            let n = rng.gen_range(1..=u.min(3000)) as usize;
            let mut xs: Vec<u64> = (0..n).map(|_| rng.gen_range(0..u)).collect();
            xs.sort_unstable();
            let ef = EliasFano::new(&xs, u).unwrap();
            for (r, &x) in xs.iter().enumerate() {
                assert_eq!(ef.select(r as u64).unwrap(), x);
            }
            let bound = 2.0 * n as f64 * (2.0 + (2.0 * u as f64 / n as f64).log2());
            assert!((ef.bits() as f64) <= bound, "bits {} bound {}", ef.bits(), bound);
        }
    }
}

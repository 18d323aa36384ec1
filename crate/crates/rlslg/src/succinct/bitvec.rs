use crate::error::{Error, Result};

const SUPER: usize = 512;
const SAMPLE: u64 = 256;

/// `SELECT_IN_BYTE[b][k]` is the position of the `k`-th set bit of `b`.
static SELECT_IN_BYTE: [[u8; 8]; 256] = build_select_table();

const fn build_select_table() -> [[u8; 8]; 256] {
    let mut t = [[8u8; 8]; 256];
    let mut b = 0;
    while b < 256 {
        let mut k = 0;
        let mut bit = 0;
        while bit < 8 {
            if b & (1 << bit) != 0 {
                t[b][k] = bit as u8;
                k += 1;
            }
            bit += 1;
        }
        b += 1;
    }
    t
}

#[inline]
fn select_in_word(mut w: u64, mut k: u32) -> u32 {
    let mut base = 0;
    loop {
        let c = (w & 0xff).count_ones();
        if k < c {
            return base + SELECT_IN_BYTE[(w & 0xff) as usize][k as usize] as u32;
        }
        k -= c;
        w >>= 8;
        base += 8;
    }
}

/// Plain bitvector with two-level rank directory and sampled select.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitVectorRS {
    len: usize,
    words: Vec<u64>,
    supers: Vec<u64>,
    blocks: Vec<u16>,
    samples: Vec<u32>,
    ones: u64,
}

impl BitVectorRS {
    pub fn from_bits(bits: &[bool]) -> Self {
        let mut words = vec![0u64; bits.len().div_ceil(64)];
        for (i, &b) in bits.iter().enumerate() {
            if b {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        Self::from_words(words, bits.len())
    }

    /// Builds from set positions, which must be sorted and below `len`.
    pub fn from_positions(len: usize, pos: &[u64]) -> Result<Self> {
        let mut words = vec![0u64; len.div_ceil(64)];
        let mut prev: Option<u64> = None;
        for &p in pos {
            if prev.is_some_and(|q| q >= p) {
                return Err(Error::UnsortedInput);
            }
            if p as usize >= len {
                return Err(Error::OutOfBounds { index: p, len: len as u64 });
            }
            words[p as usize / 64] |= 1 << (p % 64);
            prev = Some(p);
        }
        Ok(Self::from_words(words, len))
    }

    pub fn from_words(mut words: Vec<u64>, len: usize) -> Self {
        words.resize(len.div_ceil(64), 0);
        if len % 64 != 0 {
            let last = words.len() - 1;
            words[last] &= (1u64 << (len % 64)) - 1;
        }
        let mut supers = Vec::with_capacity(words.len() / 8 + 1);
        let mut blocks = Vec::with_capacity(words.len());
        let mut samples = Vec::new();
        let mut total = 0u64;
        let mut in_super = 0u64;
        for (wi, &w) in words.iter().enumerate() {
            if wi % (SUPER / 64) == 0 {
                supers.push(total);
                in_super = 0;
            }
            blocks.push(in_super as u16);
            let c = w.count_ones() as u64;
            // record the superblock holding every SAMPLE-th one
            let next_sample = samples.len() as u64 * SAMPLE;
            if next_sample < total + c {
                while (samples.len() as u64) * SAMPLE < total + c {
                    samples.push(supers.len() as u32 - 1);
                }
            }
            total += c;
            in_super += c;
        }
        BitVectorRS { len, words, supers, blocks, samples, ones: total }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn count_ones(&self) -> u64 {
        self.ones
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Number of ones in `[0, i)`, for `i <= len`.
    #[inline]
    pub fn rank1(&self, i: usize) -> u64 {
        debug_assert!(i <= self.len);
        if i >= self.len {
            return self.ones;
        }
        let w = i / 64;
        let mut r = self.supers[w / (SUPER / 64)] + self.blocks[w] as u64;
        let o = i % 64;
        if o > 0 {
            r += (self.words[w] & ((1u64 << o) - 1)).count_ones() as u64;
        }
        r
    }

    pub fn rank0(&self, i: usize) -> u64 {
        i as u64 - self.rank1(i)
    }

    /// Position of the one with rank `r` (0-based).
    pub fn select1(&self, r: u64) -> Result<u64> {
        if r >= self.ones {
            return Err(Error::RankOutOfRange { rank: r, size: self.ones });
        }
        let s = (r / SAMPLE) as usize;
        let mut lo = self.samples[s] as usize;
        let mut hi = match self.samples.get(s + 1) {
            Some(&h) => h as usize + 1,
            None => self.supers.len(),
        };
        // last superblock in [lo, hi) whose prefix count is <= r
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.supers[mid] <= r {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut rem = r - self.supers[lo];
        let first = lo * (SUPER / 64);
        let last = ((lo + 1) * (SUPER / 64)).min(self.words.len());
        let mut w = first;
        while w + 1 < last && (self.blocks[w + 1] as u64) <= rem {
            w += 1;
        }
        rem -= self.blocks[w] as u64;
        Ok(w as u64 * 64 + select_in_word(self.words[w], rem as u32) as u64)
    }

    /// Stored bits including directories.
    pub fn bits(&self) -> u64 {
        self.len as u64 + 64 * self.supers.len() as u64 + 16 * self.blocks.len() as u64 + 32 * self.samples.len() as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn select_in_byte_table() {
        assert_eq!(select_in_word(0b1011_0000, 0), 4);
        assert_eq!(select_in_word(0b1011_0000, 2), 7);
        assert_eq!(select_in_word(1 << 63, 0), 63);
    }

    #[test]
    fn empty_and_full() {
        let e = BitVectorRS::from_bits(&[]);
        assert_eq!(e.rank1(0), 0);
        assert!(e.select1(0).is_err());
        let f = BitVectorRS::from_bits(&[true; 1000]);
        for i in 0..=1000 {
            assert_eq!(f.rank1(i), i as u64);
        }
        for r in 0..1000 {
            assert_eq!(f.select1(r).unwrap(), r);
        }
    }

    #[test]
    fn random_against_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &(len, p) in &[(1usize, 0.5), (63, 0.5), (64, 0.1), (5000, 0.01), (5000, 0.5), (20000, 0.97)] {
            let bits: Vec<bool> = (0..len).map(|_| rng.gen_bool(p)).collect();
            let bv = BitVectorRS::from_bits(&bits);
            let mut pref = vec![0u64; len + 1];
            for i in 0..len {
                pref[i + 1] = pref[i] + bits[i] as u64;
            }
            let ones: Vec<u64> = (0..len as u64).filter(|&i| bits[i as usize]).collect();
            for _ in 0..2000 {
                let i = rng.gen_range(0..=len);
                assert_eq!(bv.rank1(i), pref[i]);
                if !ones.is_empty() {
                    let r = rng.gen_range(0..ones.len());
                    assert_eq!(bv.select1(r as u64).unwrap(), ones[r]);
                }
            }
        }
    }
}

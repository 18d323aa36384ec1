use crate::error::{Error, Result};

/// Bits needed to store any value in `[0, n)`; at least 1.
pub fn bits_for(n: u64) -> u32 {
    if n <= 2 {
        1
    } else {
        64 - (n - 1).leading_zeros()
    }
}

/// Fixed-width unsigned integers packed into 64-bit words.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntVec {
    width: u32,
    len: usize,
    words: Vec<u64>,
}

impl IntVec {
    pub fn new(width: u32) -> Self {
        assert!((1..=64).contains(&width));
        IntVec { width, len: 0, words: Vec::new() }
    }

    pub fn with_len(width: u32, len: usize) -> Self {
        let mut v = IntVec::new(width);
        v.len = len;
        v.words = vec![0; (len * width as usize).div_ceil(64)];
        v
    }

    pub fn from_slice(width: u32, vals: &[u64]) -> Self {
        let mut v = IntVec::with_len(width, vals.len());
        for (i, &x) in vals.iter().enumerate() {
            v.set(i, x);
        }
        v
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Payload size in bits.
    pub fn bits(&self) -> u64 {
        self.len as u64 * self.width as u64
    }

    fn mask(&self) -> u64 {
        if self.width == 64 {
            u64::MAX
        } else {
            (1u64 << self.width) - 1
        }
    }

    pub fn push(&mut self, x: u64) {
        self.len += 1;
        let need = (self.len * self.width as usize).div_ceil(64);
        self.words.resize(need, 0);
        self.set(self.len - 1, x);
    }

    pub fn set(&mut self, i: usize, x: u64) {
        debug_assert!(i < self.len);
        let x = x & self.mask();
        let bit = i * self.width as usize;
        let (w, o) = (bit / 64, bit % 64);
        self.words[w] &= !(self.mask() << o);
        self.words[w] |= x << o;
        if o + self.width as usize > 64 {
            let spill = o + self.width as usize - 64;
            let hi_mask = (1u64 << spill) - 1;
            self.words[w + 1] &= !hi_mask;
            self.words[w + 1] |= x >> (64 - o);
        }
    }

    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        debug_assert!(i < self.len);
        let bit = i * self.width as usize;
        let (w, o) = (bit / 64, bit % 64);
        let mut x = self.words[w] >> o;
        if o + self.width as usize > 64 {
            x |= self.words[w + 1] << (64 - o);
        }
        x & self.mask()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub(crate) fn raw_words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn from_raw(width: u32, len: usize, words: Vec<u64>) -> Result<Self> {
        if !(1..=64).contains(&width) || words.len() != (len * width as usize).div_ceil(64) {
            return Err(Error::Format("packed array shape mismatch".into()));
        }
        Ok(IntVec { width, len, words })
    }
}

/// A terminal string stored at a fixed number of bits per character.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PackedString {
    data: IntVec,
}

impl PackedString {
    /// Empty string with `width` bits per character.
    pub fn new(width: u32) -> Self {
        PackedString { data: IntVec::new(width) }
    }

    pub fn from_slice(width: u32, s: &[u32]) -> Self {
        let mut data = IntVec::with_len(width, s.len());
        for (i, &c) in s.iter().enumerate() {
            debug_assert!(width == 64 || (c as u64) < (1u64 << width));
            data.set(i, c as u64);
        }
        PackedString { data }
    }

    pub fn width(&self) -> u32 {
        self.data.width()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn bits(&self) -> u64 {
        self.data.bits()
    }

    pub fn char_at(&self, i: usize) -> Result<u32> {
        if i >= self.len() {
            return Err(Error::OutOfBounds { index: i as u64, len: self.len() as u64 });
        }
        Ok(self.data.get(i) as u32)
    }

    /// Characters `[lo, hi)`.
    pub fn slice(&self, lo: usize, hi: usize) -> Result<PackedString> {
        if lo > hi || hi > self.len() {
            return Err(Error::OutOfBounds { index: hi as u64, len: self.len() as u64 });
        }
        let mut out = IntVec::with_len(self.width(), hi - lo);
        for i in lo..hi {
            out.set(i - lo, self.data.get(i));
        }
        Ok(PackedString { data: out })
    }

    pub fn concat(&self, other: &PackedString) -> PackedString {
        let mut out = self.clone();
        out.append(other);
        out
    }

    pub fn append(&mut self, other: &PackedString) {
        debug_assert_eq!(self.width(), other.width());
        for x in other.data.iter() {
            self.data.push(x);
        }
    }

    /// Appends characters `[lo, hi)` of `other`.
    pub fn append_range(&mut self, other: &PackedString, lo: usize, hi: usize) {
        for i in lo..hi {
            self.data.push(other.data.get(i));
        }
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.data.iter().map(|x| x as u32).collect()
    }

    pub(crate) fn ints(&self) -> &IntVec {
        &self.data
    }

    pub(crate) fn from_ints(data: IntVec) -> Self {
        PackedString { data }
    }
}

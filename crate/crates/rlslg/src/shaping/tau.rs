use crate::error::{Error, Result};
use std::fmt;

const CLAMP_BITS: u32 = 100;

/// A fan-out parameter `tau > 1` held as an exact fraction so that
/// comparisons against `weight / tau` never round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Tau {
    num: u128,
    den: u128,
}

impl Tau {
    /// Exact value of `x`; values above `2^100` are clamped.
    pub fn new(x: f64) -> Result<Tau> {
        if !x.is_finite() || x <= 1.0 {
            return Err(Error::InvalidParameter(format!("tau must be a finite number above 1, got {x}")));
        }
        if x >= (CLAMP_BITS as f64).exp2() {
            return Ok(Tau { num: 1 << CLAMP_BITS, den: 1 });
        }
        let bits = x.to_bits();
        let exp = ((bits >> 52) & 0x7ff) as i32 - 1075;
        let mant = ((bits & ((1u64 << 52) - 1)) | (1u64 << 52)) as u128;
        let (mut num, mut den) = if exp >= 0 { (mant << exp, 1u128) } else { (mant, 1u128 << (-exp)) };
        let tz = num.trailing_zeros().min(den.trailing_zeros());
        num >>= tz;
        den >>= tz;
        Ok(Tau { num, den })
    }

    pub fn from_ratio(num: u128, den: u128) -> Result<Tau> {
        if den == 0 || num <= den {
            return Err(Error::InvalidParameter(format!("tau must exceed 1, got {num}/{den}")));
        }
        Ok(Tau { num: num.min(1 << CLAMP_BITS), den: den.min(1 << CLAMP_BITS) })
    }

    pub fn integer(n: u64) -> Result<Tau> {
        Tau::from_ratio(n as u128, 1)
    }

    pub fn num(&self) -> u128 {
        self.num
    }

    pub fn den(&self) -> u128 {
        self.den
    }

    /// `k * tau`, clamped.
    pub fn scaled(&self, k: u64) -> Tau {
        let num = self.num.saturating_mul(k.max(1) as u128).min(1 << CLAMP_BITS);
        Tau { num, den: self.den }
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Whether a child of weight `child` is heavy for a parent of weight
    /// `parent`, that is `child > parent / tau`.
    #[inline]
    pub fn is_heavy(&self, child: u64, parent: u64) -> bool {
        match (child as u128).checked_mul(self.num) {
            Some(l) => l > parent as u128 * self.den,
            None => true,
        }
    }

    /// `x <= parent / tau`.
    #[inline]
    pub fn fits(&self, x: u64, parent: u64) -> bool {
        !self.is_heavy(x, parent)
    }

    /// `ceil(log2 tau)`, at least 1.
    pub fn ceil_log2(&self) -> u32 {
        let mut c = 0;
        while (self.den << c) < self.num {
            c += 1;
        }
        c.max(1)
    }

    /// `ceil(tau)`.
    pub fn ceil(&self) -> u128 {
        self.num.div_ceil(self.den)
    }

    /// `floor(w / tau)`.
    pub fn divide(&self, w: u64) -> u64 {
        ((w as u128 * self.den) / self.num) as u64
    }
}

impl fmt::Display for Tau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_fractions() {
        let t = Tau::new(2.5).unwrap();
        assert_eq!((t.num(), t.den()), (5, 2));
        assert!(t.is_heavy(5, 12));
        assert!(!t.is_heavy(4, 10));
        assert_eq!(t.ceil_log2(), 2);
        assert_eq!(Tau::new(4.0).unwrap().ceil_log2(), 2);
        assert_eq!(Tau::new(1.5).unwrap().ceil_log2(), 1);
        assert!(Tau::new(1.0).is_err());
        assert_eq!(Tau::new(1e300).unwrap().num(), 1 << 100);
        assert!(Tau::new(1e300).unwrap().is_heavy(1 << 40, u64::MAX));
    }
}

use crate::grammar::Sym;
use crate::succinct::bits_for;
use std::fmt::Debug;

/// A monoid with fixed-width elements.
///
/// `combine` must be associative with `identity` as its neutral element.
/// `repeat(k, x)` is the `k`-fold combination of `x`; the default uses
/// doubling, monoids with a closed form override it.
pub trait Monoid {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn identity(&self) -> Self::Elem;

    fn combine(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;

    fn repeat(&self, mut k: u64, x: &Self::Elem) -> Self::Elem {
        let mut acc = self.identity();
        let mut pow = x.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.combine(&acc, &pow);
            }
            k >>= 1;
            if k > 0 {
                pow = self.combine(&pow, &pow);
            }
        }
        acc
    }

    /// Bits needed to store one element.
    fn elem_bits(&self) -> u32;
}

/// Sums of nonnegative integers saturating at `cap`.
///
/// Capping at the total of the text keeps elements in `ceil(log total)` bits
/// without changing any prefix sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CappedSum {
    pub cap: u64,
}

impl CappedSum {
    pub fn new(cap: u64) -> Self {
        CappedSum { cap }
    }
}

impl Monoid for CappedSum {
    type Elem = u64;

    fn identity(&self) -> u64 {
        0
    }

    #[inline]
    fn combine(&self, x: &u64, y: &u64) -> u64 {
        x.saturating_add(*y).min(self.cap)
    }

    #[inline]
    fn repeat(&self, k: u64, x: &u64) -> u64 {
        x.saturating_mul(k).min(self.cap)
    }

    fn elem_bits(&self) -> u32 {
        bits_for(self.cap.saturating_add(1))
    }
}

/// Maximum of nonnegative integers below `2^bits`, with zero as identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaxMonoid {
    pub bits: u32,
}

impl Monoid for MaxMonoid {
    type Elem = u64;

    fn identity(&self) -> u64 {
        0
    }

    #[inline]
    fn combine(&self, x: &u64, y: &u64) -> u64 {
        *x.max(y)
    }

    #[inline]
    fn repeat(&self, k: u64, x: &u64) -> u64 {
        if k == 0 {
            0
        } else {
            *x
        }
    }

    fn elem_bits(&self) -> u32 {
        self.bits
    }
}

/// Concatenation truncated to the last `width` symbols.
///
/// Not commutative, which makes it a useful check that sums are combined in
/// text order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowConcat {
    pub width: usize,
    /// Bits per stored symbol.
    pub sym_bits: u32,
}

impl Monoid for WindowConcat {
    type Elem = Vec<Sym>;

    fn identity(&self) -> Vec<Sym> {
        Vec::new()
    }

    fn combine(&self, x: &Vec<Sym>, y: &Vec<Sym>) -> Vec<Sym> {
        if y.len() >= self.width {
            return y[y.len() - self.width..].to_vec();
        }
        let keep = (self.width - y.len()).min(x.len());
        let mut out = Vec::with_capacity(keep + y.len());
        out.extend_from_slice(&x[x.len() - keep..]);
        out.extend_from_slice(y);
        out
    }

    fn elem_bits(&self) -> u32 {
        self.width as u32 * self.sym_bits + bits_for(self.width as u64 + 1)
    }
}

/// `Phi(c) = 1` for `c == target`, else 0, over `sigma` terminals.
pub fn indicator_phi(sigma: usize, target: Sym) -> Vec<u64> {
    (0..sigma).map(|c| (c as Sym == target) as u64).collect()
}

/// `Phi(c) = weight(c)`: prefix sums then reproduce weighted offsets.
pub fn weight_phi(weights: &[u64]) -> Vec<u64> {
    weights.to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fold<M: Monoid>(m: &M, k: u64, x: &M::Elem) -> M::Elem {
        (0..k).fold(m.identity(), |acc, _| m.combine(&acc, x))
    }

    proptest! {
        #[test]
        fn capped_sum_laws(a in 0u64..1000, b in 0u64..1000, c in 0u64..1000, k in 0u64..=64, cap in 1u64..5000) {
            let m = CappedSum::new(cap);
            let (a, b, c) = (a.min(cap), b.min(cap), c.min(cap));
            prop_assert_eq!(m.combine(&m.combine(&a, &b), &c), m.combine(&a, &m.combine(&b, &c)));
            prop_assert_eq!(m.combine(&a, &m.identity()), a);
            prop_assert_eq!(m.repeat(k, &a), fold(&m, k, &a));
        }

        #[test]
        fn max_laws(a in 0u64..1000, b in 0u64..1000, c in 0u64..1000, k in 0u64..=64) {
            let m = MaxMonoid { bits: 10 };
            prop_assert_eq!(m.combine(&m.combine(&a, &b), &c), m.combine(&a, &m.combine(&b, &c)));
            prop_assert_eq!(m.combine(&m.identity(), &a), a);
            prop_assert_eq!(m.repeat(k, &a), fold(&m, k, &a));
        }

        #[test]
        fn window_laws(
            a in proptest::collection::vec(0u32..4, 0..8),
            b in proptest::collection::vec(0u32..4, 0..8),
            c in proptest::collection::vec(0u32..4, 0..8),
            k in 0u64..=64,
            width in 1usize..6,
        ) {
            let m = WindowConcat { width, sym_bits: 2 };
            let a = m.combine(&m.identity(), &a);
            prop_assert_eq!(m.combine(&m.combine(&a, &b), &c), m.combine(&a, &m.combine(&b, &c)));
            prop_assert_eq!(m.combine(&a, &m.identity()), a.clone());
            prop_assert_eq!(m.repeat(k, &a), fold(&m, k, &a));
        }
    }

    #[test]
    fn window_keeps_suffix() {
        let m = WindowConcat { width: 3, sym_bits: 8 };
        assert_eq!(m.combine(&vec![1, 2], &vec![3, 4]), vec![2, 3, 4]);
        assert_eq!(m.repeat(5, &vec![7]), vec![7, 7, 7]);
    }
}

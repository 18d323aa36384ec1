use super::blsd::{blsd_grammar, BlsdInstance, HardInstance};
use super::pad::pad_grammar;
use crate::error::{Error, Result};
use crate::grammar::Flavor;
use rand::Rng;

/// Parameters of a hard instance for target length `n` and size `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HardParams {
    pub b: u32,
    pub p: usize,
    pub q: usize,
    /// `q * b^p`.
    pub n_core: u64,
    /// `5 p q b`.
    pub g_core: u64,
}

fn ceil_log2(n: u64) -> u64 {
    64 - (n.max(1) - 1).leading_zeros() as u64
}

/// `b = 1 + floor(w^(1+eps))`, `p = 1 + floor(log_b(n/g))` and
/// `q = floor((g - 5 log n) / (5 p b))`, with the checks `q >= 1`,
/// `q b^p <= n` and `5 p q b <= g - 5 log n`.
pub fn pick_params(n: u64, g: u64, w: u32, eps: f64) -> Result<HardParams> {
    if !(eps > 0.0) || w == 0 {
        return Err(Error::RegimeViolation("need eps > 0 and w >= 1".into()));
    }
    if n < g {
        return Err(Error::RegimeViolation(format!("n >= g fails: {n} < {g}")));
    }
    let wpow = (w as f64).powf(1.0 + eps);
    let logn = (n.max(2) as f64).log2();
    if (g as f64) < 25.0 * wpow * logn {
        return Err(Error::RegimeViolation(format!("g >= 25 w^(1+eps) log n fails: {g} < {:.1}", 25.0 * wpow * logn)));
    }
    let b = 1 + wpow.floor() as u64;
    let b32 = u32::try_from(b).map_err(|_| Error::ParameterOverflow(format!("block size {b}")))?;
    // largest k with g * b^k <= n
    let mut p = 1usize;
    let mut reach = g as u128 * b as u128;
    while reach <= n as u128 {
        p += 1;
        reach *= b as u128;
    }
    let lg = ceil_log2(n);
    let q = (g - 5 * lg) / (5 * p as u64 * b);
    if q == 0 {
        return Err(Error::RegimeViolation("q >= 1 fails".into()));
    }
    let n_core = (b as u128).pow(p as u32) * q as u128;
    if n_core > n as u128 {
        return Err(Error::RegimeViolation(format!("q b^p <= n fails: {n_core} > {n}")));
    }
    let g_core = 5 * p as u64 * q * b;
    if g_core > g - 5 * lg {
        return Err(Error::RegimeViolation("5 p q b <= g - 5 log n fails".into()));
    }
    Ok(HardParams { b: b32, p, q: q as usize, n_core: n_core as u64, g_core })
}

/// A random hard instance padded to length `n`: parameters from
/// [`pick_params`], random sets with the given element density.
pub fn generate_hard<R: Rng>(rng: &mut R, n: u64, g: u64, w: u32, eps: f64, density: f64) -> Result<HardInstance> {
    let hp = pick_params(n, g, w, eps)?;
    hard_from_params(rng, &hp, Some(n), density)
}

/// A random hard instance for explicit parameters, optionally padded.
pub fn hard_from_params<R: Rng>(rng: &mut R, hp: &HardParams, pad_to: Option<u64>, density: f64) -> Result<HardInstance> {
    let inst = BlsdInstance::random(rng, hp.p * hp.q, hp.b, density);
    let mut hi = blsd_grammar(&inst, hp.p, hp.q, Flavor::Slg)?;
    if let Some(n) = pad_to {
        hi.grammar = pad_grammar(&hi.grammar, n)?;
    }
    Ok(hi)
}

impl HardParams {
    /// Parameters given directly; `q b^p` must fit in 64 bits.
    pub fn explicit(b: u32, p: usize, q: usize) -> Result<HardParams> {
        if b == 0 || p == 0 || q == 0 {
            return Err(Error::InvalidParameter("b, p and q must be positive".into()));
        }
        let n_core = u32::try_from(p)
            .ok()
            .and_then(|pp| (b as u64).checked_pow(pp))
            .and_then(|x| x.checked_mul(q as u64))
            .ok_or_else(|| Error::ParameterOverflow(format!("{q} * {b}^{p} does not fit in 64 bits")))?;
        Ok(HardParams { b, p, q, n_core, g_core: 5 * (p * q) as u64 * b as u64 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::derive_stats;
    use crate::hardgen::pad_bound;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn regime_gate() {
        assert!(matches!(pick_params(1 << 20, 100, 64, 0.1), Err(Error::RegimeViolation(_))));
        assert!(matches!(pick_params(100, 1000, 2, 0.1), Err(Error::RegimeViolation(_))));
    }

    #[test]
    fn arithmetic_and_end_to_end() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for &(n, g, w, eps) in &[
            (1u64 << 20, 4000u64, 2u32, 0.5f64),
            (1 << 24, 20000, 4, 0.25),
            (1 << 18, 3000, 2, 0.1),
            (1 << 30, 100000, 8, 0.2),
        ] {
            let hp = pick_params(n, g, w, eps).unwrap();
            let lg = ceil_log2(n);
            assert!(hp.g_core <= g - 5 * lg);
            assert!(hp.n_core <= n);
            assert!(hp.q >= 1);
            let hi = generate_hard(&mut rng, n, g, w, eps, 0.2).unwrap();
            let st = derive_stats(&hi.grammar).unwrap();
            assert_eq!(st.start_len(&hi.grammar), n);
            assert!(hi.grammar.size() as u64 <= g);
            assert!(hi.grammar.size() as u64 <= hp.g_core + pad_bound(n));
        }
    }
}

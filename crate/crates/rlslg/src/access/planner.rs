use crate::error::{Error, Result};

/// Parameters chosen for a memory budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlannerChoice {
    pub tau: f64,
    pub b: usize,
    pub predicted_depth: u32,
    /// The budget covers the packed text; store it explicitly.
    pub explicit: bool,
}

fn log2(x: u64) -> f64 {
    (x.max(2) as f64).log2()
}

/// Maps a budget of `m` words of `w` bits to parameters for a text of length
/// `n` over `sigma` characters with a grammar of size `g`.
///
/// Requires `g log n < m w`. When `m w >= n log sigma` the choice is the
/// packed text with depth 1.
pub fn plan(n: u64, g: u64, sigma: u64, m: u64, w: u64) -> Result<PlannerChoice> {
    if n == 0 || g == 0 || w == 0 {
        return Err(Error::InvalidParameter("n, g and w must be positive".into()));
    }
    let mw = m as f64 * w as f64;
    let lower = g as f64 * log2(n);
    let upper = n as f64 * log2(sigma);
    let b = (log2(n) / log2(sigma)).ceil().max(1.0) as usize;
    if mw <= lower {
        return Err(Error::BudgetOutOfRange(format!("M*w = {mw} is not above g*log n = {lower}")));
    }
    if mw >= upper {
        return Ok(PlannerChoice { tau: 2.0, b, predicted_depth: 1, explicit: true });
    }
    let tau = (mw / lower).max(2.0);
    let depth = (upper / mw).ln() / tau.ln();
    Ok(PlannerChoice { tau, b, predicted_depth: depth.max(1.0).ceil() as u32, explicit: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn formula_example() {
        let n = 1u64 << 20;
        let c = plan(n, 1000, 2, 4 * 1000 * 20 / 64, 64).unwrap();
        assert_eq!(c.tau, 4.0);
        assert_eq!(c.b, 20);
        assert!(!c.explicit);
    }

    #[test]
    fn boundaries() {
        let n = 1u64 << 20;
        let top = plan(n, 1000, 2, n / 64, 64).unwrap();
        assert!(top.explicit);
        assert_eq!(top.predicted_depth, 1);
        assert!(matches!(plan(n, 1000, 2, 1000 * 20 / 64, 64), Err(Error::BudgetOutOfRange(_))));
    }

    proptest! {
        #[test]
        fn choice_respects_precondition(n in 2u64..1 << 40, g in 1u64..1 << 20, sigma in 2u64..256, m in 1u64..1 << 30) {
            let w = 64;
            match plan(n, g, sigma, m, w) {
                Ok(c) => {
                    prop_assert!(m as f64 * 64.0 > g as f64 * log2(n));
                    prop_assert!(c.tau >= 2.0);
                    prop_assert!(c.predicted_depth >= 1);
                    prop_assert_eq!(c.explicit, m as f64 * 64.0 >= n as f64 * log2(sigma));
                }
                Err(e) => prop_assert!(matches!(e, Error::BudgetOutOfRange(_))),
            }
        }
    }
}

use crate::error::{Error, Result};
use crate::grammar::{derive_stats, push_run, Grammar, Run, Sym};

/// Appends `n_target - n` copies of terminal 0 using doubling variables
/// `Z_i -> Z_{i-1} Z_{i-1}` and one new start rule following the binary
/// digits of the padding length, highest first.
pub fn pad_grammar(g: &Grammar, n_target: u64) -> Result<Grammar> {
    let st = derive_stats(g)?;
    let n = st.start_len(g);
    if n_target < n {
        return Err(Error::InvalidParameter(format!("target length {n_target} is below the current length {n}")));
    }
    let m = n_target - n;
    if m == 0 {
        return Ok(g.clone());
    }
    let top_bit = 63 - m.leading_zeros();
    let mut out = g.clone();
    let mut z: Vec<Sym> = vec![0];
    for i in 1..=top_bit as usize {
        let mut rule = Vec::new();
        push_run(out.flavor, &mut rule, Run::one(z[i - 1]));
        push_run(out.flavor, &mut rule, Run::one(z[i - 1]));
        z.push(out.push_rule(rule));
    }
    let mut rule = vec![Run::one(g.start)];
    for i in (0..=top_bit).rev() {
        if m >> i & 1 == 1 {
            push_run(out.flavor, &mut rule, Run::one(z[i as usize]));
        }
    }
    out.start = out.push_rule(rule);
    out.validate()?;
    Ok(out)
}

/// `3 floor(log2 n) + 2`, the size increase allowed for padding up to `n`.
pub fn pad_bound(n_target: u64) -> u64 {
    3 * (63 - n_target.max(1).leading_zeros()) as u64 + 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::random_slg;
    use crate::grammar::{expand, trivial_builder, Flavor};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_padding_is_identity() {
        let g = trivial_builder(&[1, 0, 1]).unwrap();
        assert_eq!(pad_grammar(&g, 3).unwrap(), g);
    }

    #[test]
    fn five_zeros() {
        let g = trivial_builder(&[1, 1]).unwrap();
        let h = pad_grammar(&g, 7).unwrap();
        assert_eq!(expand(&h, h.start, 100).unwrap(), vec![1, 1, 0, 0, 0, 0, 0]);
        let start = h.rule(h.start);
        assert_eq!(start.len(), 3);
        let z2 = start[1].sym;
        let z1 = h.rule(z2)[0].sym;
        assert_eq!(h.rule(z2), &[Run::one(z1), Run::one(z1)]);
        assert_eq!(h.rule(z1), &[Run::one(0), Run::one(0)]);
        assert_eq!(start[2].sym, 0);
    }

    #[test]
    fn random_padding_keeps_prefix() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for round in 0..100 {
            let flavor = if round % 2 == 0 { Flavor::Slg } else { Flavor::Rlslg };
            let mut g = random_slg(&mut rng, 2, 6, 3, false, 500);
            if flavor == Flavor::Rlslg {
                g = crate::grammar::normalize(&g).unwrap().0;
                g.flavor = Flavor::Rlslg;
                for r in &mut g.rules {
                    *r = crate::grammar::rle(r);
                }
            }
            let v = expand(&g, g.start, 1 << 20).unwrap();
            let target = v.len() as u64 + rng.gen_range(0..5000);
            let h = pad_grammar(&g, target).unwrap();
            let w = expand(&h, h.start, 1 << 20).unwrap();
            assert_eq!(w.len() as u64, target);
            assert_eq!(&w[..v.len()], &v[..]);
            assert!(w[v.len()..].iter().all(|&c| c == 0));
            assert!((h.size() - g.size()) as u64 <= pad_bound(target));
        }
    }
}

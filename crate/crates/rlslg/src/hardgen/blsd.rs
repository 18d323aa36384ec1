use crate::error::{Error, Result};
use crate::grammar::{push_run, Flavor, Grammar, Run, Sym};
use rand::Rng;

/// Blocked lopsided set disjointness input: `sets[i]` is a subset of `[0, b)`
/// for every block `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlsdInstance {
    pub b: u32,
    pub sets: Vec<Vec<u32>>,
}

impl BlsdInstance {
    pub fn new(b: u32, mut sets: Vec<Vec<u32>>) -> Result<Self> {
        if b == 0 || sets.is_empty() {
            return Err(Error::InvalidParameter("need at least one block of size at least one".into()));
        }
        for s in &mut sets {
            s.sort_unstable();
            s.dedup();
            if s.last().is_some_and(|&x| x >= b) {
                return Err(Error::InvalidParameter(format!("set element outside [0, {b})")));
            }
        }
        Ok(BlsdInstance { b, sets })
    }

    /// Every element enters each set independently with probability `density`.
    pub fn random<R: Rng>(rng: &mut R, blocks: usize, b: u32, density: f64) -> Self {
        let sets = (0..blocks).map(|_| (0..b).filter(|_| rng.gen_bool(density)).collect()).collect();
        BlsdInstance { b, sets }
    }

    pub fn blocks(&self) -> usize {
        self.sets.len()
    }

    pub fn contains(&self, block: usize, x: u32) -> bool {
        self.sets[block].binary_search(&x).is_ok()
    }

    /// Whether `pick[i]` lies in set `i` for some block `i`.
    pub fn answer(&self, pick: &[u32]) -> bool {
        pick.iter().enumerate().any(|(i, &x)| self.contains(i, x))
    }
}

/// Emits the two-level-per-block grammar of one BLSD part into a shared
/// grammar. Level `i` has `W_i(v)` for `v` in {0, 1}, where `W_0(v)` is the
/// terminal `v` and `W_i(v)` concatenates `W_{i-1}(v or [x in T(i-1)])` over
/// `x < B`. Returns `W_N(0)`.
pub(crate) struct VyBuilder {
    pub(crate) g: Grammar,
}

impl VyBuilder {
    pub(crate) fn new(flavor: Flavor) -> Self {
        VyBuilder { g: Grammar::with_terminals(2, flavor) }
    }

    pub(crate) fn part(&mut self, b: u32, sets: &[Vec<u32>]) -> Sym {
        let nb = sets.len();
        // need_one[i]: W_i(1) is referenced.
        let mut need_one = vec![false; nb + 1];
        for i in (1..=nb).rev() {
            need_one[i - 1] = need_one[i] || !sets[i - 1].is_empty();
        }
        let mut zero: Sym = 0;
        let mut one: Sym = 1;
        for i in 1..=nb {
            let set = &sets[i - 1];
            let mut rule = Vec::new();
            for x in 0..b {
                let s = if set.binary_search(&x).is_ok() { one } else { zero };
                push_run(self.g.flavor, &mut rule, Run::one(s));
            }
            let new_zero = self.g.push_rule(rule);
            if need_one[i] {
                let rule = match self.g.flavor {
                    Flavor::Rlslg => vec![Run::new(one, b as u64)],
                    Flavor::Slg => vec![Run::one(one); b as usize],
                };
                one = self.g.push_rule(rule);
            }
            zero = new_zero;
        }
        zero
    }
}

/// The binary string of length `b^N` whose position `sum pick[i] b^i` holds
/// a one iff the BLSD answer for `pick` is yes.
pub fn vy_grammar(inst: &BlsdInstance, flavor: Flavor) -> Result<Grammar> {
    length_of(inst.b, inst.blocks(), 1)?;
    let mut vb = VyBuilder::new(flavor);
    vb.g.start = vb.part(inst.b, &inst.sets);
    vb.g.validate()?;
    Ok(vb.g)
}

fn length_of(b: u32, p: usize, q: usize) -> Result<u64> {
    u32::try_from(p)
        .ok()
        .and_then(|p| (b as u64).checked_pow(p))
        .and_then(|x| x.checked_mul(q as u64))
        .ok_or_else(|| Error::ParameterOverflow(format!("{q} * {b}^{p} does not fit in 64 bits")))
}

/// A BLSD-derived grammar with the parameters needed to pose queries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardInstance {
    pub grammar: Grammar,
    pub p: usize,
    pub q: usize,
    pub b: u32,
    pub blsd: BlsdInstance,
}

/// Splits `inst` (with `p * q` blocks) into `q` parts of `p` blocks and
/// concatenates their grammars under a start rule of length `q`.
pub fn blsd_grammar(inst: &BlsdInstance, p: usize, q: usize, flavor: Flavor) -> Result<HardInstance> {
    if p == 0 || q == 0 || p * q != inst.blocks() {
        return Err(Error::InvalidParameter(format!("{} blocks do not split into {q} parts of {p}", inst.blocks())));
    }
    length_of(inst.b, p, q)?;
    let mut vb = VyBuilder::new(flavor);
    let parts: Vec<Sym> = (0..q).map(|k| vb.part(inst.b, &inst.sets[k * p..(k + 1) * p])).collect();
    vb.g.start = if q == 1 {
        parts[0]
    } else {
        let mut rule = Vec::with_capacity(q);
        for s in parts {
            push_run(flavor, &mut rule, Run::one(s));
        }
        vb.g.push_rule(rule)
    };
    vb.g.validate()?;
    Ok(HardInstance { grammar: vb.g, p, q, b: inst.b, blsd: inst.clone() })
}

impl HardInstance {
    /// Length of the probed part of the string, `q * b^p`. Padding may
    /// follow it.
    pub fn core_len(&self) -> u64 {
        (self.q as u64) * (self.b as u64).pow(self.p as u32)
    }

    /// The `q` probe positions for a BLSD query `pick`.
    pub fn query_eval(&self, pick: &[u32]) -> Result<Vec<u64>> {
        if pick.len() != self.p * self.q || pick.iter().any(|&x| x >= self.b) {
            return Err(Error::InvalidParameter("query must pick one element below b per block".into()));
        }
        let bp = (self.b as u64).pow(self.p as u32);
        Ok((0..self.q)
            .map(|k| {
                let mut pos = 0u64;
                for j in (0..self.p).rev() {
                    pos = pos * self.b as u64 + pick[k * self.p + j] as u64;
                }
                k as u64 * bp + pos
            })
            .collect())
    }

    /// Expected bit at each probe position, from the sets alone.
    pub fn expected_bits(&self, pick: &[u32]) -> Vec<bool> {
        (0..self.q).map(|k| (0..self.p).any(|j| self.blsd.contains(k * self.p + j, pick[k * self.p + j]))).collect()
    }

    /// `5 p q b`, the size bound of the construction.
    pub fn size_bound(&self) -> u64 {
        5 * (self.p * self.q) as u64 * self.b as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::expand;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn all_picks(blocks: usize, b: u32) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new()];
        for _ in 0..blocks {
            out = out.into_iter().flat_map(|p| (0..b).map(move |x| [p.clone(), vec![x]].concat())).collect();
        }
        out
    }

    #[test]
    fn single_block() {
        let inst = BlsdInstance::new(2, vec![vec![1]]).unwrap();
        let g = vy_grammar(&inst, Flavor::Slg).unwrap();
        assert_eq!(expand(&g, g.start, 100).unwrap(), vec![0, 1]);
    }

    #[test]
    fn two_blocks_match_the_equivalence() {
        let inst = BlsdInstance::new(2, vec![vec![], vec![0]]).unwrap();
        for flavor in [Flavor::Slg, Flavor::Rlslg] {
            let g = vy_grammar(&inst, flavor).unwrap();
            let v = expand(&g, g.start, 100).unwrap();
            for pick in all_picks(2, 2) {
                let pos = pick[0] + 2 * pick[1];
                assert_eq!(v[pos as usize] == 1, inst.answer(&pick));
            }
        }
    }

    #[test]
    fn exhaustive_small_parameters() {
        for (p, q, b) in [(1usize, 2usize, 2u32), (2, 1, 2), (2, 2, 2), (1, 2, 3), (2, 2, 3)] {
            let blocks = p * q;
            let universe = blocks as u32 * b;
            // every T when small enough, otherwise a seeded sample
            let ts: Vec<u64> = if universe <= 12 { (0..1u64 << universe).collect() } else {
                let mut rng = ChaCha8Rng::seed_from_u64(7);
                (0..200).map(|_| rng.gen_range(0..1u64 << universe)).collect()
            };
            let picks = all_picks(blocks, b);
            for mask in ts {
                let sets = (0..blocks).map(|i| (0..b).filter(|&x| mask >> (i as u32 * b + x) & 1 == 1).collect()).collect();
                let inst = BlsdInstance::new(b, sets).unwrap();
                let hi = blsd_grammar(&inst, p, q, Flavor::Slg).unwrap();
                assert!(hi.grammar.size() as u64 <= hi.size_bound());
                let v = expand(&hi.grammar, hi.grammar.start, 1 << 20).unwrap();
                assert_eq!(v.len() as u64, hi.core_len());
                for pick in &picks {
                    let pos = hi.query_eval(pick).unwrap();
                    let bits: Vec<bool> = pos.iter().map(|&x| v[x as usize] == 1).collect();
                    assert_eq!(bits, hi.expected_bits(pick));
                    assert_eq!(bits.iter().any(|&x| x), inst.answer(pick));
                }
            }
        }
    }

    #[test]
    fn size_bounds_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let p = rng.gen_range(1..4);
            let q = rng.gen_range(1..4);
            let b = rng.gen_range(1..6);
            let inst = BlsdInstance::random(&mut rng, p * q, b, 0.3);
            for flavor in [Flavor::Slg, Flavor::Rlslg] {
                let single = BlsdInstance::new(b, inst.sets[..p].to_vec()).unwrap();
                assert!(vy_grammar(&single, flavor).unwrap().size() as u64 <= 4 * (p as u64) * b as u64);
                let hi = blsd_grammar(&inst, p, q, flavor).unwrap();
                assert!(hi.grammar.size() as u64 <= hi.size_bound());
            }
        }
    }

    #[test]
    fn q_one_is_the_plain_grammar() {
        let inst = BlsdInstance::new(3, vec![vec![0, 2], vec![1]]).unwrap();
        assert_eq!(blsd_grammar(&inst, 2, 1, Flavor::Slg).unwrap().grammar, vy_grammar(&inst, Flavor::Slg).unwrap());
    }

    #[test]
    fn overflow_is_reported() {
        let inst = BlsdInstance::new(1000, vec![vec![]; 10]).unwrap();
        assert!(matches!(vy_grammar(&inst, Flavor::Slg), Err(Error::ParameterOverflow(_))));
    }
}

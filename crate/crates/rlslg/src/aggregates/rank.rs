use super::df::{df_image, DfGrammar};
use super::monoid::CappedSum;
use super::prefix::PrefixTable;
use crate::access::{build_nice_top, default_block_size, AccessIndex, Counting, Route, TopIndex};
use crate::error::{Error, Result};
use crate::grammar::{simplify, Sym};
use crate::shaping::{make_leafy_nice, DEFAULT_BLOCK_BUDGET};
use crate::succinct::{bits_for, BitVectorRS, EliasFano};
use std::sync::OnceLock;

/// Rank and select for every character of an indexed text.
///
/// Structures for a character are built on its first query and cached. The
/// cache publishes once per character, so concurrent first queries of the
/// same character wait for a single build.
pub struct RankSelect<'a> {
    ix: &'a AccessIndex,
    ranks: Vec<OnceLock<Result<CharRank>>>,
    selects: Vec<OnceLock<Result<SelectIndex>>>,
}

// Indicator sums over the weighted index, plus per-leaf bitvectors when the
// access index answers through plain leaves.
struct CharRank {
    table: PrefixTable<u64>,
    total: u64,
    leaf: Option<(PrefixTable<u64>, Vec<BitVectorRS>)>,
}

/// Select structures for one character: an index over the df grammar of the
/// character's indicator image.
pub struct SelectIndex {
    df: DfGrammar,
    ones: u64,
    body: Option<SelectBody>,
}

struct SelectBody {
    top: TopIndex,
    table: PrefixTable<u64>,
    leaves: Option<DfLeaves>,
    route: Route,
}

// Leafy df index. For a leaf spelling z_k0 .. z_kl, the Elias–Fano set holds
// `k0 + .. + kj + j` for every j, the select answer relative to the leaf.
struct DfLeaves {
    top: TopIndex,
    table: PrefixTable<u64>,
    sets: Vec<EliasFano>,
}

impl SelectIndex {
    fn build(ix: &AccessIndex, c: Sym) -> Result<SelectIndex> {
        let df = df_image(ix.weighted().grammar(), c)?;
        let len = df.text_len()?;
        let ones = len - 1;
        if ones == 0 {
            return Ok(SelectIndex { df, ones, body: None });
        }
        let m = CappedSum::new(u64::MAX);
        let tau = ix.tau();
        let (top, _) = build_nice_top(&df.grammar, tau)?;
        let table = PrefixTable::build(&top, &m, &df.values)?;
        let leaves = build_df_leaves(&df, len, tau)?;
        let route = match &leaves {
            Some(l) if l.top.height() + 1 <= top.height() => Route::Leafy,
            _ => Route::Weighted,
        };
        Ok(SelectIndex { df, ones, body: Some(SelectBody { top, table, leaves, route }) })
    }

    pub fn df(&self) -> &DfGrammar {
        &self.df
    }

    pub fn ones(&self) -> u64 {
        self.ones
    }

    /// Which structure answers queries: `Weighted` or `Leafy`.
    pub fn route(&self) -> Option<Route> {
        self.body.as_ref().map(|b| b.route)
    }

    /// Forces a route; `Leafy` needs leaf structures.
    pub fn set_route(&mut self, route: Route) -> Result<()> {
        let body = self.body.as_mut().ok_or(Error::NotLeafyIndex)?;
        match route {
            Route::Weighted => body.route = route,
            Route::Leafy if body.leaves.is_some() => body.route = route,
            _ => return Err(Error::NotLeafyIndex),
        }
        Ok(())
    }

    /// Bits of the Elias–Fano leaf sets and their total number of elements.
    pub fn leaf_sets(&self) -> Option<(u64, u64)> {
        let l = self.body.as_ref()?.leaves.as_ref()?;
        Some((l.sets.iter().map(|s| s.bits()).sum(), l.sets.iter().map(|s| s.len() as u64).sum()))
    }

    /// Position of the one of rank `r` in the indicator image.
    pub fn select(&self, r: u64) -> Result<u64> {
        if r >= self.ones {
            return Err(Error::RankOutOfRange { rank: r, size: self.ones });
        }
        let body = self.body.as_ref().expect("a text with ones has a body");
        let m = CappedSum::new(u64::MAX);
        match (&body.leaves, body.route) {
            (Some(l), Route::Leafy) => {
                let hit = l.table.descend(&l.top, &m, r)?;
                Ok(hit.sum + hit.offset + l.sets[hit.sym as usize].select(r - hit.offset)?)
            }
            _ => Ok(body.table.descend(&body.top, &m, r + 1)?.sum + r),
        }
    }
}

fn build_df_leaves(df: &DfGrammar, len: u64, tau: crate::shaping::Tau) -> Result<Option<DfLeaves>> {
    let g = &df.grammar;
    let width = bits_for(g.terminal_count() as u64) as usize;
    let b = default_block_size(len, g.terminal_count())
        .clamp(1, len as usize)
        .min((DEFAULT_BLOCK_BUDGET as usize / width).max(1));
    let tau_root = tau.scaled(g.size().max(1) as u64);
    let (lnice, _) = make_leafy_nice(g, b, tau_root, tau)?;
    let (top, _) = simplify(&lnice.leafy.top)?;
    let top = TopIndex::build(top, tau_root, tau, Counting::Weights, &[], &[])?;
    let mut sums = Vec::with_capacity(lnice.leafy.leaves.len());
    let mut sets = Vec::with_capacity(lnice.leafy.leaves.len());
    for leaf in &lnice.leafy.leaves {
        let mut acc = 0u64;
        let mut xs = Vec::with_capacity(leaf.len());
        for (j, t) in leaf.to_vec().into_iter().enumerate() {
            acc += df.value(t);
            xs.push(acc + j as u64);
        }
        sums.push(acc);
        sets.push(EliasFano::new(&xs, acc + leaf.len() as u64)?);
    }
    let table = PrefixTable::build(&top, &CappedSum::new(u64::MAX), &sums)?;
    Ok(Some(DfLeaves { top, table, sets }))
}

impl CharRank {
    fn build(ix: &AccessIndex, c: Sym) -> Result<CharRank> {
        let m = CappedSum::new(ix.len());
        let phi = super::indicator_phi(ix.sigma(), c);
        let table = PrefixTable::build(ix.weighted(), &m, &phi)?;
        let total = *table.value(ix.weighted().grammar().start);
        let leaf = match ix.leafy() {
            Some(lf) if !lf.is_unrolled() => {
                let mut counts = Vec::with_capacity(lf.leaves().len());
                let mut bits = Vec::with_capacity(lf.leaves().len());
                for leaf in lf.leaves() {
                    let marks: Vec<bool> = leaf.to_vec().into_iter().map(|x| x == c).collect();
                    let bv = BitVectorRS::from_bits(&marks);
                    counts.push(bv.count_ones());
                    bits.push(bv);
                }
                Some((PrefixTable::build(lf.top(), &m, &counts)?, bits))
            }
            _ => None,
        };
        Ok(CharRank { table, total, leaf })
    }
}

impl<'a> RankSelect<'a> {
    pub fn new(ix: &'a AccessIndex) -> Self {
        let sigma = ix.sigma();
        RankSelect {
            ix,
            ranks: (0..sigma).map(|_| OnceLock::new()).collect(),
            selects: (0..sigma).map(|_| OnceLock::new()).collect(),
        }
    }

    /// Builds the structures of every character up front.
    pub fn prebuild_all(&self) -> Result<()> {
        for c in 0..self.ix.sigma() as Sym {
            self.char_rank(c)?;
            self.select_index(c)?;
        }
        Ok(())
    }

    fn check(&self, c: Sym) -> Result<()> {
        if c as usize >= self.ix.sigma() {
            return Err(Error::UnknownTerminal(c));
        }
        Ok(())
    }

    fn char_rank(&self, c: Sym) -> Result<&CharRank> {
        self.check(c)?;
        self.ranks[c as usize].get_or_init(|| CharRank::build(self.ix, c)).as_ref().map_err(|e| e.clone())
    }

    /// Select structures of `c`, built on first use.
    pub fn select_index(&self, c: Sym) -> Result<&SelectIndex> {
        self.check(c)?;
        self.selects[c as usize].get_or_init(|| SelectIndex::build(self.ix, c)).as_ref().map_err(|e| e.clone())
    }

    /// Number of occurrences of `c` among the first `i` characters.
    pub fn rank(&self, c: Sym, i: u64) -> Result<u64> {
        let cr = self.char_rank(c)?;
        let n = self.ix.len();
        if i > n {
            return Err(Error::OutOfBounds { index: i, len: n });
        }
        if i == n {
            return Ok(cr.total);
        }
        let m = CappedSum::new(n);
        if let (Some((table, bits)), Route::Leafy) = (&cr.leaf, self.ix.route()) {
            let lf = self.ix.leafy().expect("leaf ranks need a leafy index");
            let hit = table.descend(lf.top(), &m, i)?;
            return Ok(hit.sum + bits[hit.sym as usize].rank1((i - hit.offset) as usize));
        }
        let top = self.ix.weighted();
        let hit = if self.ix.is_unweighted() { cr.table.descend(top, &m, i)? } else { cr.table.descend_count(top, &m, i)? };
        Ok(hit.sum)
    }

    /// Number of occurrences of `c` in the text.
    pub fn count(&self, c: Sym) -> Result<u64> {
        Ok(self.char_rank(c)?.total)
    }

    /// Position of the occurrence of `c` with rank `r` (0-based).
    pub fn select(&self, c: Sym, r: u64) -> Result<u64> {
        self.select_index(c)?.select(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::access::{build_index, BuildConfig};
    use crate::corpus::{random_rlslg, random_slg};
    use crate::grammar::{expand, trivial_builder};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_examples() {
        let g = trivial_builder(&[0, 1, 0, 1]).unwrap();
        let ix = build_index(&g, &BuildConfig::default()).unwrap();
        let rs = RankSelect::new(&ix);
        assert_eq!(rs.rank(1, 0).unwrap(), 0);
        assert_eq!(rs.rank(1, 4).unwrap(), 2);
        assert_eq!(rs.rank(2, 0), Err(Error::UnknownTerminal(2)));
        assert!(matches!(rs.rank(0, 5), Err(Error::OutOfBounds { .. })));

        let g = trivial_builder(&[0, 0, 1, 0, 1, 1, 0]).unwrap();
        let ix = build_index(&g, &BuildConfig::default()).unwrap();
        let rs = RankSelect::new(&ix);
        let got: Vec<u64> = (0..3).map(|r| rs.select(1, r).unwrap()).collect();
        assert_eq!(got, vec![2, 4, 5]);
        assert_eq!(rs.select(1, 3), Err(Error::RankOutOfRange { rank: 3, size: 3 }));

        let g = trivial_builder(&[0, 0, 0, 1, 0]).unwrap();
        let ix = build_index(&g, &BuildConfig::default()).unwrap();
        assert_eq!(RankSelect::new(&ix).select(1, 0).unwrap(), 3);
    }

    fn cross_check(ix: &AccessIndex, text: &[Sym], sigma: usize) {
        let rs = RankSelect::new(ix);
        for c in 0..sigma as Sym {
            let mut count = 0u64;
            let mut pos = Vec::new();
            for (i, &x) in text.iter().enumerate() {
                assert_eq!(rs.rank(c, i as u64).unwrap(), count);
                if x == c {
                    pos.push(i as u64);
                    count += 1;
                }
            }
            assert_eq!(rs.rank(c, text.len() as u64).unwrap(), count);
            for (r, &p) in pos.iter().enumerate() {
                assert_eq!(rs.select(c, r as u64).unwrap(), p);
            }
            assert!(matches!(rs.select(c, count), Err(Error::RankOutOfRange { .. })));
            for i in 0..text.len() {
                let r = rs.rank(c, i as u64).unwrap();
                if r < count {
                    let s = rs.select(c, r).unwrap();
                    assert!(s >= i as u64);
                    assert_eq!(s == i as u64, text[i] == c);
                }
            }
        }
    }

    #[test]
    fn random_grammars_exhaustive() {
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        for round in 0..40 {
            let sigma = rng.gen_range(1..4);
            let nv = rng.gen_range(1..10);
            let weighted = round % 4 == 3;
            let g = if round % 2 == 0 {
                random_slg(&mut rng, sigma, nv, 4, weighted, 2000)
            } else {
                random_rlslg(&mut rng, sigma, nv, 4, weighted, 2000)
            };
            let text = expand(&g, g.start, 1 << 20).unwrap();
            let ix = build_index(&g, &BuildConfig::with_tau(2.0 + (round % 3) as f64)).unwrap();
            cross_check(&ix, &text, sigma);
        }
    }

    #[test]
    fn both_select_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(92);
        for _ in 0..30 {
            let g = random_rlslg(&mut rng, 2, 8, 4, false, 20000);
            let ix = build_index(&g, &BuildConfig::default()).unwrap();
            let text = expand(&g, g.start, 1 << 20).unwrap();
            let ones: Vec<u64> = (0..text.len() as u64).filter(|&i| text[i as usize] == 1).collect();
            let mut si = SelectIndex::build(&ix, 1).unwrap();
            if ones.is_empty() {
                continue;
            }
            for route in [Route::Weighted, Route::Leafy] {
                si.set_route(route).unwrap();
                for (r, &p) in ones.iter().enumerate() {
                    assert_eq!(si.select(r as u64).unwrap(), p);
                }
            }
            let (bits, m) = si.leaf_sets().unwrap();
            let n = text.len() as f64;
            let bound = 8.0 * m as f64 * (2.0 + (2.0 * n / m as f64).log2()) + 64.0 * si.body.as_ref().unwrap().leaves.as_ref().unwrap().sets.len() as f64;
            assert!((bits as f64) <= bound, "{bits} > {bound}");
        }
    }

    #[test]
    fn leaf_rank_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(93);
        for _ in 0..20 {
            let g = random_slg(&mut rng, 3, 10, 4, false, 20000);
            let mut ix = build_index(&g, &BuildConfig::default()).unwrap();
            let text = expand(&g, g.start, 1 << 20).unwrap();
            for route in [Route::Weighted, Route::Leafy] {
                ix.set_route(route).unwrap();
                let rs = RankSelect::new(&ix);
                let mut count = 0;
                for (i, &x) in text.iter().enumerate() {
                    assert_eq!(rs.rank(2, i as u64).unwrap(), count);
                    count += (x == 2) as u64;
                }
            }
        }
    }

    #[test]
    fn concurrent_first_queries() {
        let g = crate::corpus::fibonacci(20);
        let ix = build_index(&g, &BuildConfig::default()).unwrap();
        let rs = RankSelect::new(&ix);
        let want = rs_oracle(&expand(&g, g.start, 1 << 20).unwrap());
        std::thread::scope(|s| {
            for t in 0..4 {
                let rs = &rs;
                let want = &want;
                s.spawn(move || {
                    for r in (t..want.len()).step_by(97) {
                        assert_eq!(rs.select(1, r as u64).unwrap(), want[r]);
                    }
                });
            }
        });
    }

    fn rs_oracle(text: &[Sym]) -> Vec<u64> {
        (0..text.len() as u64).filter(|&i| text[i as usize] == 1).collect()
    }
}

//! Binary container for [`AccessIndex`].
//!
//! All integers are little-endian base-128 varints; a `u128` is written as its
//! high then low 64-bit halves; a vector is its length followed by its items;
//! a packed array is `width, len, word count, words`.
//!
//! ```text
//! "RSIX" version(1)
//! input_size sigma length d route(0 weighted, 1 leafy, 2 explicit)
//! tau.num tau.den
//! top                                      the weighted index
//! has_leafy(0|1) [b unrolled d leaves:vec<packed> top]
//! has_explicit(0|1) [text:packed cum:vec]
//!
//! top := grammar_bytes:vec<u8> tau_root.num tau_root.den tau_var.num
//!        tau_var.den counting(0 weights, 1 counts, 2 marks) height
//!        count:vec last:vec node*            one node per variable, in order
//! node := pref:vec rank counts:vec lasts:vec
//! rank := 0 packed                          direct table
//!       | 1 universe width strategy(0 scan, 1 binary) elems:vec counters:vec
//! ```
//!
//! Rules are taken from the embedded grammar; prefix weights are checked
//! against them on load.

use super::child::{ChildIndex, RankTable};
use super::index::{AccessIndex, ExplicitText, LeafyIndex, Route};
use super::top::{Counting, TopIndex};
use crate::error::{Error, Result};
use crate::grammar::{derive_stats, read_binary, write_binary};
use crate::shaping::Tau;
use crate::succinct::{BucketStrategy, BucketedRank, IntVec, PackedString};
use crate::varint::{get_varint, put_varint};

const MAGIC: &[u8; 4] = b"RSIX";
const VERSION: u64 = 1;

struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn u(&mut self) -> Result<u64> {
        get_varint(self.data, &mut self.pos)
    }

    fn len(&mut self) -> Result<usize> {
        let n = self.u()?;
        if n > (self.data.len() - self.pos) as u64 * 8 + 64 {
            return Err(Error::Format("length exceeds input".into()));
        }
        Ok(n as usize)
    }

    fn u128(&mut self) -> Result<u128> {
        let hi = self.u()? as u128;
        Ok(hi << 64 | self.u()? as u128)
    }

    fn tau(&mut self) -> Result<Tau> {
        let n = self.u128()?;
        let d = self.u128()?;
        Tau::from_ratio(n, d).map_err(|_| Error::Format("bad tau".into()))
    }

    fn vec(&mut self) -> Result<Vec<u64>> {
        let n = self.len()?;
        (0..n).map(|_| self.u()).collect()
    }

    fn bytes(&mut self) -> Result<&[u8]> {
        let n = self.len()?;
        let end = self.pos.checked_add(n).filter(|&e| e <= self.data.len());
        let end = end.ok_or_else(|| Error::Format("truncated bytes".into()))?;
        let s = &self.data[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn packed(&mut self) -> Result<IntVec> {
        let width = self.u()? as u32;
        let len = self.len()?;
        let words = self.vec()?;
        IntVec::from_raw(width, len, words)
    }

    fn flag(&mut self) -> Result<bool> {
        match self.u()? {
            0 => Ok(false),
            1 => Ok(true),
            x => Err(Error::Format(format!("bad flag {x}"))),
        }
    }
}

fn put_u128(out: &mut Vec<u8>, x: u128) {
    put_varint(out, (x >> 64) as u64);
    put_varint(out, x as u64);
}

fn put_tau(out: &mut Vec<u8>, t: Tau) {
    put_u128(out, t.num());
    put_u128(out, t.den());
}

fn put_vec(out: &mut Vec<u8>, v: &[u64]) {
    put_varint(out, v.len() as u64);
    for &x in v {
        put_varint(out, x);
    }
}

fn put_packed(out: &mut Vec<u8>, v: &IntVec) {
    put_varint(out, v.width() as u64);
    put_varint(out, v.len() as u64);
    put_vec(out, v.raw_words());
}

fn put_top(out: &mut Vec<u8>, t: &TopIndex) {
    let g = write_binary(&t.grammar);
    put_varint(out, g.len() as u64);
    out.extend_from_slice(&g);
    put_tau(out, t.tau_root);
    put_tau(out, t.tau_var);
    put_varint(
        out,
        match t.counting {
            Counting::Weights => 0,
            Counting::Counts => 1,
            Counting::Marks => 2,
        },
    );
    put_varint(out, t.height as u64);
    put_vec(out, &t.count);
    put_vec(out, &t.last);
    for ci in &t.nodes {
        put_vec(out, &ci.pref);
        match &ci.rank {
            RankTable::Direct(tab) => {
                put_varint(out, 0);
                put_packed(out, tab);
            }
            RankTable::Bucketed(b) => {
                put_varint(out, 1);
                put_varint(out, b.universe());
                put_varint(out, b.bucket_width());
                put_varint(out, if b.strategy() == BucketStrategy::Scan { 0 } else { 1 });
                put_vec(out, b.elements());
                put_varint(out, b.counters().len() as u64);
                for &c in b.counters() {
                    put_varint(out, c as u64);
                }
            }
        }
        put_vec(out, &ci.counts);
        put_vec(out, &ci.lasts);
    }
}

fn get_top(r: &mut Reader) -> Result<TopIndex> {
    let grammar = read_binary(r.bytes()?)?;
    let st = derive_stats(&grammar)?;
    let tau_root = r.tau()?;
    let tau_var = r.tau()?;
    let counting = match r.u()? {
        0 => Counting::Weights,
        1 => Counting::Counts,
        2 => Counting::Marks,
        x => return Err(Error::Format(format!("bad counting mode {x}"))),
    };
    let height = r.u()? as u32;
    let count = r.vec()?;
    let last = r.vec()?;
    let n = grammar.symbol_count();
    let want_count = if counting == Counting::Weights { 0 } else { n };
    let want_last = if counting == Counting::Marks { n } else { 0 };
    if count.len() != want_count || last.len() != want_last {
        return Err(Error::Format("annotation length mismatch".into()));
    }
    let mut nodes = Vec::with_capacity(grammar.variable_count());
    for v in 0..grammar.variable_count() {
        let runs = grammar.rule(grammar.var_sym(v)).to_vec();
        let pref = r.vec()?;
        let mut expect = vec![0u64];
        for run in &runs {
            expect.push(expect.last().unwrap() + run.exp * st.weight[run.sym as usize]);
        }
        if pref != expect {
            return Err(Error::Format(format!("prefix weights of variable {v} disagree with its rule")));
        }
        let total = *pref.last().unwrap();
        let rank = match r.u()? {
            0 => {
                let tab = r.packed()?;
                if tab.len() as u64 != total {
                    return Err(Error::Format("direct table length mismatch".into()));
                }
                RankTable::Direct(tab)
            }
            1 => {
                let universe = r.u()?;
                let width = r.u()?;
                let strategy = if r.flag()? { BucketStrategy::Binary } else { BucketStrategy::Scan };
                let elems = r.vec()?;
                let nc = r.len()?;
                let counters = (0..nc).map(|_| r.u().map(|x| x as u32)).collect::<Result<Vec<_>>>()?;
                if universe != total || elems != pref[1..runs.len()] {
                    return Err(Error::Format("bucketed rank disagrees with prefix weights".into()));
                }
                RankTable::Bucketed(BucketedRank::from_parts(universe, width, elems, counters, strategy)?)
            }
            x => return Err(Error::Format(format!("bad rank kind {x}"))),
        };
        let counts = r.vec()?;
        let lasts = r.vec()?;
        if counts.len() != if want_count > 0 { runs.len() + 1 } else { 0 }
            || lasts.len() != if want_last > 0 { runs.len() + 1 } else { 0 }
        {
            return Err(Error::Format("run annotation length mismatch".into()));
        }
        nodes.push(ChildIndex { runs, pref, rank, counts, lasts });
    }
    Ok(TopIndex { grammar, weight: st.weight, count, last, nodes, tau_root, tau_var, counting, height })
}

impl AccessIndex {
    /// Serializes the index. Equal indexes give identical bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        put_varint(&mut out, VERSION);
        put_varint(&mut out, self.input_size as u64);
        put_varint(&mut out, self.sigma as u64);
        put_varint(&mut out, self.length);
        put_varint(&mut out, self.d as u64);
        put_varint(
            &mut out,
            match self.route {
                Route::Weighted => 0,
                Route::Leafy => 1,
                Route::Explicit => 2,
            },
        );
        put_tau(&mut out, self.tau);
        put_top(&mut out, &self.weighted);
        match &self.leafy {
            None => put_varint(&mut out, 0),
            Some(l) => {
                put_varint(&mut out, 1);
                put_varint(&mut out, l.b as u64);
                put_varint(&mut out, l.unrolled as u64);
                put_varint(&mut out, l.d as u64);
                put_varint(&mut out, l.leaves.len() as u64);
                for leaf in &l.leaves {
                    put_packed(&mut out, leaf.ints());
                }
                put_top(&mut out, &l.top);
            }
        }
        match &self.explicit {
            None => put_varint(&mut out, 0),
            Some(e) => {
                put_varint(&mut out, 1);
                put_packed(&mut out, e.text.ints());
                put_vec(&mut out, &e.cum);
            }
        }
        out
    }

    pub fn from_bytes(data: &[u8]) -> Result<AccessIndex> {
        if data.len() < 4 || &data[..4] != MAGIC {
            return Err(Error::Format("missing index magic".into()));
        }
        let mut r = Reader { data, pos: 4 };
        let version = r.u()?;
        if version != VERSION {
            return Err(Error::Format(format!("unsupported index version {version}")));
        }
        let input_size = r.u()? as usize;
        let sigma = r.u()? as usize;
        let length = r.u()?;
        let d = r.u()? as usize;
        let route = match r.u()? {
            0 => Route::Weighted,
            1 => Route::Leafy,
            2 => Route::Explicit,
            x => return Err(Error::Format(format!("bad route {x}"))),
        };
        let tau = r.tau()?;
        let weighted = get_top(&mut r)?;
        if weighted.grammar.terminal_count() != sigma {
            return Err(Error::Format("terminal count mismatch".into()));
        }
        let leafy = if r.flag()? {
            let b = r.u()? as usize;
            let unrolled = r.flag()?;
            let d = r.u()? as usize;
            let nl = r.len()?;
            let leaves = (0..nl).map(|_| r.packed().map(PackedString::from_ints)).collect::<Result<Vec<_>>>()?;
            let top = get_top(&mut r)?;
            if top.grammar.terminal_count() != leaves.len() {
                return Err(Error::Format("leaf count mismatch".into()));
            }
            Some(LeafyIndex { top, leaves, b, unrolled, d })
        } else {
            None
        };
        let explicit = if r.flag()? {
            let text = PackedString::from_ints(r.packed()?);
            let cum = r.vec()?;
            Some(ExplicitText { text, cum })
        } else {
            None
        };
        if r.pos != data.len() {
            return Err(Error::Format("trailing bytes".into()));
        }
        let ok = match route {
            Route::Weighted => true,
            Route::Leafy => leafy.is_some(),
            Route::Explicit => explicit.is_some(),
        };
        if !ok {
            return Err(Error::Format("route has no structure".into()));
        }
        let terminal_weights = weighted.grammar.terminal_weights.clone();
        Ok(AccessIndex {
            weighted,
            leafy,
            explicit,
            route,
            sigma,
            terminal_weights,
            length,
            input_size,
            tau,
            d,
        })
    }
}

#[cfg(test)]
mod tests {
    use crate::access::{build_index, AccessIndex, BuildConfig};
    use crate::corpus::random_rlslg;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn round_trip_and_determinism() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for it in 0..20 {
            let g = random_rlslg(&mut rng, 3, 8, 4, it % 2 == 0, 2000);
            let cfg = BuildConfig { explicit: it % 3 == 0, ..BuildConfig::with_tau(3.0) };
            let ix = build_index(&g, &cfg).unwrap();
            let bytes = ix.to_bytes();
            let back = AccessIndex::from_bytes(&bytes).unwrap();
            assert_eq!(back, ix);
            assert_eq!(build_index(&g, &cfg).unwrap().to_bytes(), bytes);
            assert!(AccessIndex::from_bytes(&bytes[..bytes.len() - 1]).is_err());
        }
    }
}

use super::monoid::Monoid;
use crate::access::{AccessIndex, TopIndex};
use crate::error::{Error, Result};
use crate::grammar::{topo_order, Sym};

/// Per-symbol values `Phi(A)` and per-rule run prefix sums over a [`TopIndex`].
///
/// `sums[v][j]` is the value of the first `j` runs of variable `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct PrefixTable<E> {
    pub(crate) phi: Vec<E>,
    pub(crate) sums: Vec<Vec<E>>,
}

impl<E: Clone> PrefixTable<E> {
    pub(crate) fn build<M: Monoid<Elem = E>>(top: &TopIndex, m: &M, term: &[E]) -> Result<Self> {
        let g = top.grammar();
        let t = g.terminal_count();
        if term.len() != t {
            return Err(Error::InvalidParameter(format!("{} terminal values for {t} terminals", term.len())));
        }
        let mut phi: Vec<Option<E>> = term.iter().cloned().map(Some).collect();
        phi.resize(g.symbol_count(), None);
        let mut sums = vec![Vec::new(); g.variable_count()];
        for v in topo_order(g)? {
            let runs = &top.node(v).runs;
            let mut s = Vec::with_capacity(runs.len() + 1);
            let mut acc = m.identity();
            s.push(acc.clone());
            for r in runs {
                let x = phi[r.sym as usize].as_ref().expect("children precede parents");
                acc = m.combine(&acc, &m.repeat(r.exp, x));
                s.push(acc.clone());
            }
            phi[v as usize] = Some(acc);
            sums[v as usize - t] = s;
        }
        let phi = phi.into_iter().map(|x| x.expect("every variable is reachable in topological order")).collect();
        Ok(PrefixTable { phi, sums })
    }

    pub(crate) fn value(&self, s: Sym) -> &E {
        &self.phi[s as usize]
    }

    pub(crate) fn len(&self) -> usize {
        self.phi.len() + self.sums.iter().map(|s| s.len()).sum::<usize>()
    }
}

/// Where a prefix-sum descent ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Reached<E> {
    pub(crate) sum: E,
    pub(crate) sym: Sym,
    pub(crate) offset: u64,
    pub(crate) steps: u32,
}

impl<E: Clone> PrefixTable<E> {
    /// Descends to the terminal covering weighted position `i`, summing
    /// everything to its left.
    pub(crate) fn descend<M: Monoid<Elem = E>>(&self, top: &TopIndex, m: &M, i: u64) -> Result<Reached<E>> {
        let total = top.total_weight();
        if i >= total {
            return Err(Error::IndexOutOfRange { index: i, weight: total });
        }
        let t = top.grammar().terminal_count();
        let mut s = top.grammar().start;
        let mut a = 0u64;
        let mut p = m.identity();
        let mut steps = 0u32;
        while s as usize >= t {
            let hit = top.node(s).child(a, i)?;
            let local = m.combine(&self.sums[s as usize - t][hit.run], &m.repeat(hit.copy, &self.phi[hit.sym as usize]));
            p = m.combine(&p, &local);
            s = hit.sym;
            a = hit.offset;
            steps += 1;
        }
        Ok(Reached { sum: p, sym: s, offset: a, steps })
    }

    /// Like [`descend`](Self::descend) but by character position, using the
    /// per-run character counts of the index. Returns the position of the
    /// reached terminal's first character as `offset`.
    pub(crate) fn descend_count<M: Monoid<Elem = E>>(&self, top: &TopIndex, m: &M, j: u64) -> Result<Reached<E>> {
        let g = top.grammar();
        let total = top.count_of(g.start);
        if j >= total {
            return Err(Error::OutOfBounds { index: j, len: total });
        }
        let t = g.terminal_count();
        let mut s = g.start;
        let mut base = 0u64;
        let mut p = m.identity();
        let mut steps = 0u32;
        while s as usize >= t {
            let ci = top.node(s);
            let cum = if ci.counts.is_empty() { &ci.pref } else { &ci.counts };
            let y = j - base;
            let run = cum.partition_point(|&c| c <= y) - 1;
            let b = ci.runs[run].sym;
            let cb = top.count_of(b);
            let copy = (y - cum[run]) / cb;
            let local = m.combine(&self.sums[s as usize - t][run], &m.repeat(copy, &self.phi[b as usize]));
            p = m.combine(&p, &local);
            base += cum[run] + copy * cb;
            s = b;
            steps += 1;
        }
        Ok(Reached { sum: p, sym: s, offset: base, steps })
    }
}

/// Prefix sums of a monoid image of the text, over the weighted index of an
/// [`AccessIndex`].
pub struct AggregateIndex<'a, M: Monoid> {
    ix: &'a AccessIndex,
    monoid: M,
    table: PrefixTable<M::Elem>,
}

impl<'a, M: Monoid> AggregateIndex<'a, M> {
    /// `phi` gives the value of every terminal.
    pub fn new(ix: &'a AccessIndex, monoid: M, phi: &[M::Elem]) -> Result<Self> {
        let table = PrefixTable::build(ix.weighted(), &monoid, phi)?;
        Ok(AggregateIndex { ix, monoid, table })
    }

    pub fn monoid(&self) -> &M {
        &self.monoid
    }

    /// `Phi(T[0..j))` where `j` is the number of characters ending at or
    /// before weighted position `i`.
    pub fn prefix_sum(&self, i: u64) -> Result<M::Elem> {
        self.prefix_sum_traced(i).map(|(x, _)| x)
    }

    /// Like [`prefix_sum`](Self::prefix_sum), also returning the number of
    /// child queries made.
    pub fn prefix_sum_traced(&self, i: u64) -> Result<(M::Elem, u32)> {
        let r = self.table.descend(self.ix.weighted(), &self.monoid, i)?;
        Ok((r.sum, r.steps))
    }

    /// `Phi(T[0..j))` for a character position `j <= n`.
    pub fn prefix_at(&self, j: u64) -> Result<M::Elem> {
        let n = self.ix.len();
        if j == n {
            return Ok(self.total());
        }
        let top = self.ix.weighted();
        if self.ix.is_unweighted() {
            Ok(self.table.descend(top, &self.monoid, j)?.sum)
        } else {
            Ok(self.table.descend_count(top, &self.monoid, j)?.sum)
        }
    }

    /// `Phi(T)`.
    pub fn total(&self) -> M::Elem {
        self.table.value(self.ix.weighted().grammar().start).clone()
    }

    /// `Phi(A)` for a symbol of the indexed grammar.
    pub fn symbol_value(&self, s: Sym) -> Result<&M::Elem> {
        if s as usize >= self.table.phi.len() {
            return Err(Error::UnknownSymbol { sym: s });
        }
        Ok(self.table.value(s))
    }

    /// Bits of the stored values and run sums.
    pub fn bits(&self) -> u64 {
        self.table.len() as u64 * self.monoid.elem_bits() as u64
    }
}

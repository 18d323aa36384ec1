use super::{derive_stats, Grammar, Stats, Sym};
use crate::error::{Error, Result};

/// Default cap on oracle expansions (characters).
pub const DEFAULT_EXPAND_CAP: u64 = 1 << 28;

/// The terminal string `exp(sym)`. Fails with `TooLarge` above `cap` characters.
pub fn expand(g: &Grammar, sym: Sym, cap: u64) -> Result<Vec<Sym>> {
    let st = derive_stats(g)?;
    let len = st.len[sym as usize];
    if len > cap {
        return Err(Error::TooLarge { len, cap });
    }
    Ok(extract_substring(g, &st, sym, 0, len))
}

/// Expansion of every symbol, for small grammars only.
pub fn expand_all(g: &Grammar, cap: u64) -> Result<Vec<Vec<Sym>>> {
    let st = derive_stats(g)?;
    let total: u64 = st.len.iter().sum();
    if total > cap {
        return Err(Error::TooLarge { len: total, cap });
    }
    let mut out: Vec<Vec<Sym>> = vec![Vec::new(); g.symbol_count()];
    for t in 0..g.terminal_count() {
        out[t] = vec![t as Sym];
    }
    for &v in &st.order {
        let mut s = Vec::with_capacity(st.len[v as usize] as usize);
        for r in g.rule(v) {
            for _ in 0..r.exp {
                s.extend_from_slice(&out[r.sym as usize]);
            }
        }
        out[v as usize] = s;
    }
    Ok(out)
}

/// `exp(sym)[lo..hi)` by unweighted position, without expanding the rest.
pub fn extract_substring(g: &Grammar, st: &Stats, sym: Sym, lo: u64, hi: u64) -> Vec<Sym> {
    let mut out = Vec::with_capacity(hi.saturating_sub(lo) as usize);
    let mut stack: Vec<(Sym, u64, u64)> = vec![(sym, lo, hi)];
    while let Some((s, lo, hi)) = stack.pop() {
        if lo >= hi {
            continue;
        }
        if g.is_terminal(s) {
            out.push(s);
            continue;
        }
        // collect overlapping pieces left to right, then push reversed
        let mark = stack.len();
        let mut pos = 0u64;
        for r in g.rule(s) {
            let l = st.len[r.sym as usize];
            let span = l * r.exp;
            if pos + span <= lo {
                pos += span;
                continue;
            }
            if pos >= hi {
                break;
            }
            let first = (lo.saturating_sub(pos)) / l;
            let last = ((hi - pos - 1) / l).min(r.exp - 1);
            for c in first..=last {
                let base = pos + c * l;
                let a = lo.max(base) - base;
                let b = hi.min(base + l) - base;
                stack.push((r.sym, a, b));
            }
            pos += span;
        }
        stack[mark..].reverse();
    }
    out
}

/// A parse-tree node: symbol, weighted offset and depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParseNode {
    pub sym: Sym,
    pub offset: u64,
    pub depth: u32,
}

/// All parse-tree nodes in preorder. Fails when there are more than `cap` nodes.
pub fn parse_tree_nodes(g: &Grammar, cap: u64) -> Result<Vec<ParseNode>> {
    let st = derive_stats(g)?;
    let mut out = Vec::new();
    let mut stack = vec![ParseNode { sym: g.start, offset: 0, depth: 0 }];
    while let Some(nd) = stack.pop() {
        out.push(nd);
        if out.len() as u64 > cap {
            return Err(Error::TooLarge { len: out.len() as u64, cap });
        }
        if g.is_terminal(nd.sym) {
            continue;
        }
        let mark = stack.len();
        let mut off = nd.offset;
        for r in g.rule(nd.sym) {
            let w = st.weight[r.sym as usize];
            for _ in 0..r.exp {
                stack.push(ParseNode { sym: r.sym, offset: off, depth: nd.depth + 1 });
                off += w;
            }
        }
        stack[mark..].reverse();
    }
    Ok(out)
}

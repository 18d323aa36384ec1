use super::{Grammar, Sym};
use crate::error::{Error, Result};

/// Derived per-symbol quantities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stats {
    /// Weight of every symbol.
    pub weight: Vec<u64>,
    /// Unweighted expansion length of every symbol.
    pub len: Vec<u64>,
    /// Height: 0 for terminals, 1 + max over children otherwise.
    pub height: Vec<u32>,
    /// Variables in an order where children precede parents.
    pub order: Vec<Sym>,
    /// `|G|`.
    pub size: usize,
}

impl Stats {
    pub fn start_weight(&self, g: &Grammar) -> u64 {
        self.weight[g.start as usize]
    }
    pub fn start_len(&self, g: &Grammar) -> u64 {
        self.len[g.start as usize]
    }
    pub fn start_height(&self, g: &Grammar) -> u32 {
        self.height[g.start as usize]
    }
}

/// Topological order of all variables (children first). Detects cycles.
pub fn topo_order(g: &Grammar) -> Result<Vec<Sym>> {
    let t = g.terminal_count();
    let nv = g.variable_count();
    // 0 = unseen, 1 = on stack, 2 = done
    let mut state = vec![0u8; nv];
    let mut order = Vec::with_capacity(nv);
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for root in 0..nv {
        if state[root] != 0 {
            continue;
        }
        state[root] = 1;
        stack.push((root, 0));
        while let Some(&mut (v, ref mut pos)) = stack.last_mut() {
            let rule = &g.rules[v];
            if *pos < rule.len() {
                let s = rule[*pos].sym as usize;
                *pos += 1;
                if s < t {
                    continue;
                }
                let c = s - t;
                if c >= nv {
                    return Err(Error::UnknownSymbol { sym: s as Sym });
                }
                match state[c] {
                    0 => {
                        state[c] = 1;
                        stack.push((c, 0));
                    }
                    1 => return Err(Error::CyclicGrammar { var: s as Sym }),
                    _ => {}
                }
            } else {
                state[v] = 2;
                order.push((t + v) as Sym);
                stack.pop();
            }
        }
    }
    Ok(order)
}

/// Weights, lengths and heights with 64-bit arithmetic.
pub fn derive_stats(g: &Grammar) -> Result<Stats> {
    derive_stats_capped(g, 64)
}

/// As [`derive_stats`] but fails with `Overflow` once any weight needs more than `bits` bits.
pub fn derive_stats_capped(g: &Grammar, bits: u32) -> Result<Stats> {
    let cap: u64 = if bits >= 64 { u64::MAX } else { (1u64 << bits) - 1 };
    let order = topo_order(g)?;
    let n = g.symbol_count();
    let t = g.terminal_count();
    let mut weight = vec![0u64; n];
    let mut len = vec![0u64; n];
    let mut height = vec![0u32; n];
    for s in 0..t {
        weight[s] = g.terminal_weights[s];
        if weight[s] > cap {
            return Err(Error::Overflow { bits });
        }
        len[s] = 1;
    }
    let ovf = || Error::Overflow { bits };
    for &v in &order {
        let mut w = 0u64;
        let mut l = 0u64;
        let mut h = 0u32;
        for r in g.rule(v) {
            let c = r.sym as usize;
            w = weight[c].checked_mul(r.exp).and_then(|x| x.checked_add(w)).ok_or_else(ovf)?;
            l = len[c].checked_mul(r.exp).and_then(|x| x.checked_add(l)).ok_or_else(ovf)?;
            h = h.max(height[c] + 1);
        }
        if w > cap {
            return Err(ovf());
        }
        weight[v as usize] = w;
        len[v as usize] = l;
        height[v as usize] = h;
    }
    Ok(Stats { weight, len, height, order, size: g.size() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{Flavor, Run};

    #[test]
    fn abab_stats() {
        let mut g = Grammar::with_terminals(2, Flavor::Slg);
        let a = g.push_rule(vec![Run::one(0), Run::one(1)]);
        g.start = g.push_rule(vec![Run::one(a), Run::one(a)]);
        let st = derive_stats(&g).unwrap();
        assert_eq!(st.weight[g.start as usize], 4);
        assert_eq!(st.height[g.start as usize], 2);
        assert_eq!(st.size, 4);
    }

    #[test]
    fn power_stats() {
        let mut g = Grammar::with_terminals(2, Flavor::Rlslg);
        let a = g.push_rule(vec![Run::one(0), Run::one(1)]);
        g.start = g.push_rule(vec![Run::new(a, 3)]);
        let st = derive_stats(&g).unwrap();
        assert_eq!(st.weight[g.start as usize], 6);
        assert_eq!(st.size, 3);
    }

    #[test]
    fn terminal_start() {
        let mut g = Grammar::with_terminals(3, Flavor::Slg);
        g.terminal_weights[2] = 7;
        g.start = 2;
        let st = derive_stats(&g).unwrap();
        assert_eq!(st.height[2], 0);
        assert_eq!(st.weight[2], 7);
    }

    #[test]
    fn overflow_detected() {
        let mut g = Grammar::with_terminals(1, Flavor::Rlslg);
        let a = g.push_rule(vec![Run::new(0, 1 << 20)]);
        g.start = g.push_rule(vec![Run::new(a, 1 << 20)]);
        assert!(derive_stats_capped(&g, 32).is_err());
        assert!(derive_stats_capped(&g, 64).is_ok());
    }
}

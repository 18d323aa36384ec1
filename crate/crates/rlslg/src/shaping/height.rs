//! Exact checks of the parse-tree height bounds for nice grammars.

use super::Tau;
use crate::error::Result;
use crate::grammar::{derive_stats, topo_order, Grammar, Sym};
use num_bigint::BigUint;

/// Largest depth at which each symbol occurs in the parse tree, or `None` if
/// it does not occur.
pub fn symbol_depths(g: &Grammar) -> Result<Vec<Option<u32>>> {
    let order = topo_order(g)?;
    let mut depth: Vec<Option<u32>> = vec![None; g.symbol_count()];
    depth[g.start as usize] = Some(0);
    for &v in order.iter().rev() {
        let Some(d) = depth[v as usize] else { continue };
        for r in g.rule(v) {
            let c = &mut depth[r.sym as usize];
            *c = Some(c.map_or(d + 1, |x| x.max(d + 1)));
        }
    }
    Ok(depth)
}

/// Height of the parse tree: the largest depth of any node.
pub fn parse_tree_height(g: &Grammar) -> Result<u32> {
    Ok(symbol_depths(g)?.into_iter().flatten().max().unwrap_or(0))
}

fn big(x: u128) -> BigUint {
    BigUint::from(x)
}

/// `tau_root * tau_var^e * x <= total`, exactly.
fn chain_fits(tau_root: Tau, tau_var: Tau, e: u32, x: u64, total: u64) -> bool {
    let lhs = big(tau_root.num()) * big(tau_var.num()).pow(e) * big(x as u128);
    let rhs = big(total as u128) * big(tau_root.den()) * big(tau_var.den()).pow(e);
    lhs <= rhs
}

/// Checks that every parse-tree node `(A, a)` at depth `l >= 3` satisfies
/// `tau_root * tau_var^(l-2) * weight(A) <= weight(S)`. Returns the first
/// symbol that breaks it.
pub fn nice_height_violation(g: &Grammar, tau_root: Tau, tau_var: Tau) -> Result<Option<Sym>> {
    let st = derive_stats(g)?;
    let total = st.weight[g.start as usize];
    for (s, d) in symbol_depths(g)?.into_iter().enumerate() {
        if let Some(d) = d {
            if d >= 3 && !chain_fits(tau_root, tau_var, d - 2, st.weight[s], total) {
                return Ok(Some(s as Sym));
            }
        }
    }
    Ok(None)
}

/// Height of a leafy grammar (top part plus one level of characters) and
/// whether it satisfies `h <= 3` or `tau_root * tau_var^(h-3) * b <= weight(S)`.
pub fn leafy_height_check(top: &Grammar, b: usize, tau_root: Tau, tau_var: Tau) -> Result<(u32, bool)> {
    let st = derive_stats(top)?;
    let h = parse_tree_height(top)? + 1;
    let total = st.weight[top.start as usize];
    let ok = h <= 3 || chain_fits(tau_root, tau_var, h - 3, b as u64, total);
    Ok((h, ok))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_text;

    #[test]
    fn depths_take_longest_path() {
        let g = parse_text("start: S\nA -> 'a' 'b'\nB -> A 'c'\nS -> A B\n").unwrap();
        let d = symbol_depths(&g).unwrap();
        assert_eq!(d['a' as usize], Some(3));
        assert_eq!(d[g.start as usize], Some(0));
        assert_eq!(parse_tree_height(&g).unwrap(), 3);
    }

    #[test]
    fn chain_inequality_is_exact() {
        let t = Tau::new(2.0).unwrap();
        assert!(chain_fits(t, t, 2, 1, 8));
        assert!(!chain_fits(t, t, 2, 1, 7));
    }
}

use super::{push_run, topo_order, Grammar, Sym};
use crate::error::Result;

/// Removes variables whose rule is a single symbol with exponent one and
/// drops variables unreachable from the start. Terminals keep their ids;
/// surviving variables keep their relative order.
///
/// The mapping sends each old symbol to the new symbol with the same
/// expansion, or `None` if the symbol no longer occurs.
pub fn simplify(g: &Grammar) -> Result<(Grammar, Vec<Option<Sym>>)> {
    let order = topo_order(g)?;
    let n = g.symbol_count();
    let mut alias: Vec<Sym> = (0..n as Sym).collect();
    for &v in &order {
        let rule = g.rule(v);
        if rule.len() == 1 && rule[0].exp == 1 {
            alias[v as usize] = alias[rule[0].sym as usize];
        }
    }
    let mut reach = vec![false; n];
    reach[alias[g.start as usize] as usize] = true;
    for &v in order.iter().rev() {
        if reach[v as usize] && alias[v as usize] == v {
            for r in g.rule(v) {
                reach[alias[r.sym as usize] as usize] = true;
            }
        }
    }
    let t = g.terminal_count();
    let mut new_id: Vec<Option<Sym>> = vec![None; n];
    for (s, id) in new_id.iter_mut().enumerate().take(t) {
        *id = Some(s as Sym);
    }
    let mut next = t as Sym;
    for s in t..n {
        if reach[s] && alias[s] == s as Sym {
            new_id[s] = Some(next);
            next += 1;
        }
    }
    let mut out = Grammar::with_terminals(t, g.flavor);
    out.terminal_weights = g.terminal_weights.clone();
    for s in t..n {
        if new_id[s].is_some() && s >= t {
            let mut rule = Vec::with_capacity(g.rule(s as Sym).len());
            for r in g.rule(s as Sym) {
                let c = new_id[alias[r.sym as usize] as usize].expect("children of reachable rules are reachable");
                push_run(g.flavor, &mut rule, super::Run::new(c, r.exp));
            }
            out.rules.push(rule);
        }
    }
    out.start = new_id[alias[g.start as usize] as usize].expect("start is reachable");
    let map = (0..n).map(|s| if reach[alias[s] as usize] { new_id[alias[s] as usize] } else { None }).collect();
    Ok((out, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{expand, parse_text};

    #[test]
    fn unary_and_dead_rules_removed() {
        let g = parse_text("start: S\nD -> 'x' 'x'\nU -> A\nA -> 'a' 'b'\nS -> U A U\n").unwrap();
        let (h, map) = simplify(&g).unwrap();
        assert_eq!(h.variable_count(), 2);
        assert_eq!(map[g.terminal_count()], None);
        assert_eq!(expand(&h, h.start, 100).unwrap(), expand(&g, g.start, 100).unwrap());
        assert_eq!(map[g.terminal_count() + 1], map[g.terminal_count() + 2]);
    }

    #[test]
    fn unary_start_becomes_terminal() {
        let g = parse_text("start: S\nS -> 'q'\n").unwrap();
        let (h, _) = simplify(&g).unwrap();
        assert_eq!(h.start, 'q' as u32);
        assert!(h.rules.is_empty());
    }
}

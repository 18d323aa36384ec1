use super::{derive_stats, extract_substring, push_run, Grammar, Run, Sym};
use crate::error::Result;

/// Whether every rule is a pair of symbols or a single power.
///
/// In run-length form a pair `B B` is stored as the run `B^2`, so a lone run
/// with exponent two counts as a pair.
pub fn is_normal_form(g: &Grammar) -> bool {
    g.rules.iter().all(|r| match r.len() {
        1 => r[0].exp >= 2,
        2 => r[0].exp == 1 && r[1].exp == 1,
        _ => false,
    })
}

/// Converts `g` into normal form.
///
/// Returns the new grammar and, for every old symbol, the new symbol with the
/// same expansion. Terminals keep their ids.
pub fn normalize(g: &Grammar) -> Result<(Grammar, Vec<Sym>)> {
    g.validate()?;
    let st = derive_stats(g)?;
    let mut out = Grammar {
        terminal_weights: g.terminal_weights.clone(),
        rules: Vec::new(),
        start: 0,
        flavor: g.flavor,
    };
    let mut map: Vec<Sym> = (0..g.symbol_count() as Sym).collect();
    for &v in &st.order {
        let len = st.len[v as usize];
        if len == 1 {
            let child = g.rule(v)[0].sym;
            map[v as usize] = map[child as usize];
            continue;
        }
        if len == 2 {
            let s = extract_substring(g, &st, v, 0, 2);
            let mut rule = Vec::new();
            push_run(g.flavor, &mut rule, Run::one(s[0]));
            push_run(g.flavor, &mut rule, Run::one(s[1]));
            map[v as usize] = out.push_rule(rule);
            continue;
        }
        let mut seq: Vec<Run> = Vec::new();
        for r in g.rule(v) {
            push_run(g.flavor, &mut seq, Run::new(map[r.sym as usize], r.exp));
        }
        if seq.len() == 1 {
            map[v as usize] = if seq[0].exp == 1 { seq[0].sym } else { out.push_rule(seq) };
            continue;
        }
        let items: Vec<Sym> = seq
            .iter()
            .map(|r| if r.exp > 1 { out.push_rule(vec![*r]) } else { r.sym })
            .collect();
        map[v as usize] = build_tree(&mut out, &items);
    }
    out.start = map[g.start as usize];
    Ok((out, map))
}

fn build_tree(out: &mut Grammar, items: &[Sym]) -> Sym {
    if items.len() == 1 {
        return items[0];
    }
    let mid = items.len() / 2;
    let l = build_tree(out, &items[..mid]);
    let r = build_tree(out, &items[mid..]);
    let mut rule = Vec::new();
    push_run(out.flavor, &mut rule, Run::one(l));
    push_run(out.flavor, &mut rule, Run::one(r));
    out.push_rule(rule)
}

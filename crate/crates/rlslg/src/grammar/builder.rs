use super::{Flavor, Grammar, Run, Sym};
use crate::error::{Error, Result};

/// Balanced binary SLG spelling `text`. Terminal ids are the text values.
pub fn trivial_builder(text: &[Sym]) -> Result<Grammar> {
    if text.is_empty() {
        return Err(Error::EmptyInput);
    }
    let sigma = *text.iter().max().unwrap() as usize + 1;
    let mut g = Grammar::with_terminals(sigma, Flavor::Slg);
    g.start = build(&mut g, text);
    Ok(g)
}

fn build(g: &mut Grammar, text: &[Sym]) -> Sym {
    if text.len() == 1 {
        return text[0];
    }
    let mid = text.len() / 2;
    let l = build(g, &text[..mid]);
    let r = build(g, &text[mid..]);
    g.push_rule(vec![Run::one(l), Run::one(r)])
}

//! Line-oriented text format.
//!
//! ```text
//! terminals: 128        (optional, default max terminal id + 1)
//! flavor: rlslg         (optional, inferred from exponents)
//! start: S
//! weights: 'x'=3, #5=2  (optional)
//! S -> A^3 'c'
//! A -> 'a' #98
//! ```
//!
//! Terminals are written `'x'` (id = code point of `x`) or `#<id>`; anything
//! else is a variable name. Variables get ids in order of their rule lines.

use super::{push_run, Flavor, Grammar, Run, Sym};
use crate::error::{Error, Result};
use std::collections::HashMap;
use std::fmt::Write as _;

enum Tok {
    Term(u32),
    Var(String),
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_symbol(tok: &str, line: usize) -> Result<Tok> {
    if let Some(rest) = tok.strip_prefix('#') {
        return rest.parse::<u32>().map(Tok::Term).map_err(|_| perr(line, format!("bad terminal {tok}")));
    }
    if tok.starts_with('\'') {
        let chars: Vec<char> = tok.chars().collect();
        if chars.len() == 3 && chars[2] == '\'' {
            return Ok(Tok::Term(chars[1] as u32));
        }
        return Err(perr(line, format!("bad quoted terminal {tok}")));
    }
    if tok.is_empty() {
        return Err(perr(line, "empty symbol"));
    }
    Ok(Tok::Var(tok.to_string()))
}

/// Splits a rule body into tokens; quoted terminals may contain spaces.
fn tokenize(body: &str, line: usize) -> Result<Vec<String>> {
    let mut toks = Vec::new();
    let chars: Vec<char> = body.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        let mut cur = String::new();
        if chars[i] == '\'' {
            if i + 2 >= chars.len() || chars[i + 2] != '\'' {
                return Err(perr(line, "unterminated quoted terminal"));
            }
            cur.extend(&chars[i..i + 3]);
            i += 3;
        }
        while i < chars.len() && !chars[i].is_whitespace() {
            cur.push(chars[i]);
            i += 1;
        }
        toks.push(cur);
    }
    Ok(toks)
}

fn split_exp(tok: &str, line: usize) -> Result<(&str, u64)> {
    // the caret of a quoted '^' terminal is not an exponent marker
    let search_from = if tok.starts_with('\'') { 3.min(tok.len()) } else { 0 };
    match tok[search_from..].rfind('^') {
        Some(p) => {
            let p = p + search_from;
            let e = tok[p + 1..].parse::<u64>().map_err(|_| perr(line, format!("bad exponent in {tok}")))?;
            Ok((&tok[..p], e))
        }
        None => Ok((tok, 1)),
    }
}

/// Parses the text format.
pub fn parse_text(src: &str) -> Result<Grammar> {
    let mut start_name: Option<(String, usize)> = None;
    let mut flavor: Option<Flavor> = None;
    let mut declared_terms: Option<usize> = None;
    let mut weights: Vec<(u32, u64)> = Vec::new();
    let mut rules: Vec<(String, Vec<(Tok, u64)>, usize)> = Vec::new();
    for (ln, raw) in src.lines().enumerate() {
        let line = ln + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with("//") {
            continue;
        }
        if let Some(rest) = l.strip_prefix("start:") {
            start_name = Some((rest.trim().to_string(), line));
        } else if let Some(rest) = l.strip_prefix("flavor:") {
            flavor = Some(match rest.trim() {
                "slg" => Flavor::Slg,
                "rlslg" => Flavor::Rlslg,
                other => return Err(perr(line, format!("unknown flavor {other}"))),
            });
        } else if let Some(rest) = l.strip_prefix("terminals:") {
            declared_terms = Some(rest.trim().parse().map_err(|_| perr(line, "bad terminal count"))?);
        } else if let Some(rest) = l.strip_prefix("weights:") {
            for item in rest.split(',') {
                let item = item.trim();
                if item.is_empty() {
                    continue;
                }
                let (t, w) = item.rsplit_once('=').ok_or_else(|| perr(line, "weight needs t=w"))?;
                let t = match parse_symbol(t.trim(), line)? {
                    Tok::Term(t) => t,
                    Tok::Var(_) => return Err(perr(line, "weights apply to terminals only")),
                };
                let w = w.trim().parse::<u64>().map_err(|_| perr(line, "bad weight"))?;
                weights.push((t, w));
            }
        } else if let Some((lhs, body)) = l.split_once("->") {
            let name = lhs.trim().to_string();
            if name.is_empty() || name.starts_with('#') || name.starts_with('\'') {
                return Err(perr(line, "bad variable name"));
            }
            let mut syms = Vec::new();
            for tok in tokenize(body, line)? {
                let (s, e) = split_exp(&tok, line)?;
                syms.push((parse_symbol(s, line)?, e));
            }
            rules.push((name, syms, line));
        } else {
            return Err(perr(line, format!("unrecognized line: {l}")));
        }
    }
    let mut max_term: i64 = -1;
    for (t, _) in &weights {
        max_term = max_term.max(*t as i64);
    }
    for (_, syms, _) in &rules {
        for (s, _) in syms {
            if let Tok::Term(t) = s {
                max_term = max_term.max(*t as i64);
            }
        }
    }
    let sigma = match declared_terms {
        Some(n) if (n as i64) <= max_term => return Err(perr(0, "terminal id exceeds declared count")),
        Some(n) => n,
        None => (max_term + 1) as usize,
    };
    let any_power = rules.iter().any(|(_, s, _)| s.iter().any(|(_, e)| *e != 1));
    let flavor = flavor.unwrap_or(if any_power { Flavor::Rlslg } else { Flavor::Slg });
    let mut ids: HashMap<String, Sym> = HashMap::new();
    for (i, (name, _, line)) in rules.iter().enumerate() {
        if ids.insert(name.clone(), (sigma + i) as Sym).is_some() {
            return Err(perr(*line, format!("variable {name} defined twice")));
        }
    }
    let mut g = Grammar::with_terminals(sigma, flavor);
    for (t, w) in weights {
        g.terminal_weights[t as usize] = w;
    }
    for (_, syms, line) in &rules {
        let mut rule = Vec::new();
        for (s, e) in syms {
            let id = match s {
                Tok::Term(t) => *t,
                Tok::Var(n) => *ids.get(n).ok_or_else(|| perr(*line, format!("undefined variable {n}")))?,
            };
            if flavor == Flavor::Rlslg {
                push_run(flavor, &mut rule, Run::new(id, *e));
            } else {
                rule.push(Run::new(id, *e));
            }
        }
        g.rules.push(rule);
    }
    let (sname, sline) = start_name.ok_or_else(|| perr(0, "missing start line"))?;
    g.start = match parse_symbol(&sname, sline)? {
        Tok::Term(t) => t,
        Tok::Var(n) => *ids.get(&n).ok_or_else(|| perr(sline, format!("undefined start {n}")))?,
    };
    g.validate()?;
    Ok(g)
}

fn term_text(t: u32) -> String {
    match char::from_u32(t) {
        Some(c) if c.is_ascii_graphic() && c != '\'' && c != '#' => format!("'{c}'"),
        _ => format!("#{t}"),
    }
}

/// Writes `g` so that [`parse_text`] reproduces it exactly.
pub fn write_text(g: &Grammar) -> String {
    let mut s = String::new();
    let name = |x: Sym| -> String {
        if g.is_terminal(x) {
            term_text(x)
        } else {
            format!("X{}", x as usize - g.terminal_count())
        }
    };
    let _ = writeln!(s, "terminals: {}", g.terminal_count());
    let _ = writeln!(s, "flavor: {}", if g.flavor == Flavor::Slg { "slg" } else { "rlslg" });
    let _ = writeln!(s, "start: {}", name(g.start));
    let heavy: Vec<String> = g
        .terminal_weights
        .iter()
        .enumerate()
        .filter(|(_, &w)| w != 1)
        .map(|(t, w)| format!("{}={}", term_text(t as u32), w))
        .collect();
    if !heavy.is_empty() {
        let _ = writeln!(s, "weights: {}", heavy.join(", "));
    }
    for v in 0..g.variable_count() {
        let _ = write!(s, "X{v} ->");
        for r in &g.rules[v] {
            if r.exp == 1 {
                let _ = write!(s, " {}", name(r.sym));
            } else {
                let _ = write!(s, " {}^{}", name(r.sym), r.exp);
            }
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::expand;

    #[test]
    fn parses_example() {
        let g = parse_text("start: S\nS -> A A\nA -> 'a' 'b'\n").unwrap();
        assert_eq!(g.flavor, Flavor::Slg);
        let s: Vec<u32> = expand(&g, g.start, 100).unwrap();
        assert_eq!(s, vec!['a' as u32, 'b' as u32, 'a' as u32, 'b' as u32]);
    }

    #[test]
    fn powers_and_weights() {
        let g = parse_text("start: S\nweights: #0=3\nS -> A^3 #1\nA -> #0 #1\n").unwrap();
        assert_eq!(g.flavor, Flavor::Rlslg);
        assert_eq!(g.terminal_weights, vec![3, 1]);
        assert_eq!(g.rule(g.start), &[Run::new(3, 3), Run::one(1)]);
    }

    #[test]
    fn round_trip() {
        let g = parse_text("start: S\nweights: 'x'=4\nS -> A^3 ' ' '^'^2\nA -> 'x' #7\n").unwrap();
        let back = parse_text(&write_text(&g)).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn errors_carry_line() {
        assert!(matches!(parse_text("start: S\nS -> B\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_text("S -> 'a'\n"), Err(Error::Parse { .. })));
    }
}

//! Binary grammar format.
//!
//! Layout, all integers as little-endian base-128 varints:
//! `"RSLG"`, version (1), flavor (0 = SLG, 1 = RLSLG), terminal count,
//! terminal weights, variable count, start, then per variable its run count
//! followed by `(symbol, exponent)` pairs.

use super::{Flavor, Grammar, Run};
use crate::error::{Error, Result};
use crate::varint::{get_varint, put_varint};

const MAGIC: &[u8; 4] = b"RSLG";
const VERSION: u64 = 1;

pub fn write_binary(g: &Grammar) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + 4 * g.size());
    out.extend_from_slice(MAGIC);
    put_varint(&mut out, VERSION);
    put_varint(&mut out, if g.flavor == Flavor::Slg { 0 } else { 1 });
    put_varint(&mut out, g.terminal_count() as u64);
    for &w in &g.terminal_weights {
        put_varint(&mut out, w);
    }
    put_varint(&mut out, g.variable_count() as u64);
    put_varint(&mut out, g.start as u64);
    for rule in &g.rules {
        put_varint(&mut out, rule.len() as u64);
        for r in rule {
            put_varint(&mut out, r.sym as u64);
            put_varint(&mut out, r.exp);
        }
    }
    out
}

pub fn read_binary(data: &[u8]) -> Result<Grammar> {
    if data.len() < 4 || &data[..4] != MAGIC {
        return Err(Error::Format("missing grammar magic".into()));
    }
    let mut pos = 4;
    let version = get_varint(data, &mut pos)?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let flavor = match get_varint(data, &mut pos)? {
        0 => Flavor::Slg,
        1 => Flavor::Rlslg,
        f => return Err(Error::Format(format!("unknown flavor {f}"))),
    };
    let sigma = get_varint(data, &mut pos)? as usize;
    if sigma > data.len() {
        return Err(Error::Format("terminal count exceeds input".into()));
    }
    let mut terminal_weights = Vec::with_capacity(sigma);
    for _ in 0..sigma {
        terminal_weights.push(get_varint(data, &mut pos)?);
    }
    let nv = get_varint(data, &mut pos)? as usize;
    if nv > data.len() {
        return Err(Error::Format("variable count exceeds input".into()));
    }
    let start = get_varint(data, &mut pos)? as u32;
    let mut rules = Vec::with_capacity(nv);
    for _ in 0..nv {
        let len = get_varint(data, &mut pos)? as usize;
        if len > data.len() {
            return Err(Error::Format("rule length exceeds input".into()));
        }
        let mut rule = Vec::with_capacity(len);
        for _ in 0..len {
            let sym = get_varint(data, &mut pos)? as u32;
            let exp = get_varint(data, &mut pos)?;
            rule.push(Run::new(sym, exp));
        }
        rules.push(rule);
    }
    if pos != data.len() {
        return Err(Error::Format("trailing bytes".into()));
    }
    let g = Grammar { terminal_weights, rules, start, flavor };
    g.validate()?;
    Ok(g)
}

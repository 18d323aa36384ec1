//! Loading inputs and formatting symbols.

use crate::CliError;
use rlslg::access::AccessIndex;
use rlslg::grammar::{parse_text, read_binary, trivial_builder, Grammar, Sym};
use std::path::Path;

const INDEX_MAGIC: &[u8; 4] = b"RSIX";
const GRAMMAR_MAGIC: &[u8; 4] = b"RSLG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum InputKind {
    /// Grammar file, text or binary (detected by magic bytes).
    Grammar,
    /// Plain text; every byte is a terminal.
    Text,
}

/// What a file turned out to hold.
pub enum Loaded {
    Grammar(Grammar),
    Index(Box<AccessIndex>),
}

pub fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn load_grammar(path: &Path, kind: InputKind) -> Result<Grammar, CliError> {
    match load(path, kind)? {
        Loaded::Grammar(g) => Ok(g),
        Loaded::Index(_) => Err(CliError::Usage(format!("{} is an index, expected a grammar", path.display()))),
    }
}

pub fn load_index(path: &Path) -> Result<AccessIndex, CliError> {
    let data = read(path)?;
    if !data.starts_with(INDEX_MAGIC) {
        return Err(CliError::Usage(format!("{} is not an index file", path.display())));
    }
    Ok(AccessIndex::from_bytes(&data)?)
}

pub fn load(path: &Path, kind: InputKind) -> Result<Loaded, CliError> {
    let data = read(path)?;
    if kind == InputKind::Text {
        let text: Vec<Sym> = data.iter().map(|&b| b as Sym).collect();
        return Ok(Loaded::Grammar(trivial_builder(&text)?));
    }
    if data.starts_with(INDEX_MAGIC) {
        return Ok(Loaded::Index(Box::new(AccessIndex::from_bytes(&data)?)));
    }
    if data.starts_with(GRAMMAR_MAGIC) {
        return Ok(Loaded::Grammar(read_binary(&data)?));
    }
    let src = String::from_utf8(data).map_err(|_| CliError::Usage(format!("{} is not UTF-8 text", path.display())))?;
    Ok(Loaded::Grammar(parse_text(&src)?))
}

pub fn write(path: &Path, data: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, data).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Printable ASCII as itself, anything else as `#id`.
pub fn fmt_sym(c: Sym) -> String {
    if (0x20..0x7f).contains(&c) {
        char::from_u32(c).expect("ASCII").to_string()
    } else {
        format!("#{c}")
    }
}

/// Symbols concatenated when all are printable, space-separated otherwise.
pub fn fmt_syms(s: &[Sym]) -> String {
    if s.iter().all(|&c| (0x20..0x7f).contains(&c)) {
        s.iter().map(|&c| fmt_sym(c)).collect()
    } else {
        s.iter().map(|&c| fmt_sym(c)).collect::<Vec<_>>().join(" ")
    }
}

/// `#id` or a single character.
pub fn parse_sym(s: &str) -> Result<Sym, CliError> {
    if let Some(rest) = s.strip_prefix('#') {
        if let Ok(v) = rest.parse() {
            return Ok(v);
        }
    }
    let mut it = s.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => Ok(c as Sym),
        _ => Err(CliError::Usage(format!("bad character {s:?}: use a single character or #id"))),
    }
}

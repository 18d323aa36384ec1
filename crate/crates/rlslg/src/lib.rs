//! Compressed random access, traversal and aggregate queries over weighted
//! straight-line grammars and their run-length variant.

pub mod access;
pub mod aggregates;
pub mod error;
pub mod grammar;
pub mod hardgen;
pub mod contracting;
pub mod corpus;
pub mod shaping;
pub mod succinct;
pub mod traversal;
mod varint;

pub use error::{Error, Result};
pub use grammar::{Flavor, Grammar, Run, Sym};

//! Bit-level building blocks: packed integer arrays and strings, rank/select
//! bitvectors, Elias–Fano sequences, bucketed rank over sparse sets and
//! level-ancestor queries.

mod bitvec;
mod bucketed;
mod elias_fano;
mod level_ancestor;
mod packed;

pub use bitvec::BitVectorRS;
pub use bucketed::{BucketStrategy, BucketedRank};
pub use elias_fano::EliasFano;
pub use level_ancestor::LevelAncestor;
pub use packed::{bits_for, IntVec, PackedString};

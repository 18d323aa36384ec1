//! Monoid prefix sums, rank and select over indexed grammars.

mod df;
mod monoid;
mod prefix;
mod rank;

pub use df::{df_image, df_of_text, df_transform, DfGrammar, DfShape};
pub use monoid::{indicator_phi, weight_phi, CappedSum, MaxMonoid, Monoid, WindowConcat};
pub use prefix::AggregateIndex;
pub use rank::{RankSelect, SelectIndex};

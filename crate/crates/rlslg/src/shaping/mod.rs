//! Reshaping contracting grammars into nice and leafy form.

mod height;
mod leafy;
mod nice;
mod tau;

pub use height::{leafy_height_check, nice_height_violation, parse_tree_height, symbol_depths};
pub use leafy::{
    leafy_violation, make_leafy, make_leafy_nice, make_leafy_nice_with_budget, make_leafy_with_budget, LeafyGrammar,
    LeafyNiceGrammar, DEFAULT_BLOCK_BUDGET,
};
pub use nice::{check_nice, make_nice, make_nice_rhs, nice_violation, NiceGrammar, NiceViolation};
pub use tau::Tau;

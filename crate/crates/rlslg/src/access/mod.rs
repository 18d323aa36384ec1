//! Child queries, random access and the budget planner.

mod child;
mod index;
mod planner;
mod serialize;
mod top;

pub use child::{ChildHit, ChildIndex, RankTable};
pub use index::{
    build_index, default_block_size, unroll, within_depth_bound, AccessIndex, BuildConfig, BuildReport, ExplicitText,
    Hit, LeafyIndex, LeafyReport, Route, TopReport,
};
pub(crate) use index::build_nice_top;
pub use planner::{plan, PlannerChoice};
pub use top::{Counting, Landing, TopIndex};

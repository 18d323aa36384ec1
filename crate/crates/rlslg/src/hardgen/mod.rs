//! Hard instances for random access, built from blocked lopsided set
//! disjointness inputs with known answers.

mod blsd;
mod pad;
mod params;

pub use blsd::{blsd_grammar, vy_grammar, BlsdInstance, HardInstance};
pub use pad::{pad_bound, pad_grammar};
pub use params::{generate_hard, hard_from_params, pick_params, HardParams};

//! Exact integer engine: splitting numbers, odd-iterate indices and gap bounds.

mod decomposition;
mod helpers;
mod iterate;
mod splitting;

pub use decomposition::{BlockPath, Decomposition};
pub use helpers::{ceil_e, floor_int, frac_gap, Rational, Real};
pub use iterate::{
    ekeland_index, find_gap_m, gap_lower_bound, iterate, iterate_block, IterationIndex,
};
pub use splitting::{splitting_numbers, SplittingPair};

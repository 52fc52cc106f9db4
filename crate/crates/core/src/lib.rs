//! Index iteration for symmetric closed characteristics on centrally symmetric
//! convex hypersurfaces, with a dual-action orbit finder and spectral
//! cross-validation.
//!
//! The crate is organised bottom-up:
//!
//! * [`symplectic`] holds matrix algebra, normal forms and monodromy classification.
//! * [`index`] is the exact integer engine (splitting numbers, odd-iterate indices,
//!   gap bounds).
//! * [`dual`] minimises the dual action on antiperiodic Fourier loops and recovers
//!   closed characteristics.
//! * [`spectral`] integrates linearized flows and counts Morse indices of the
//!   truncated quadratic forms.

// Negated comparisons reject NaN on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod dual;
pub mod error;
pub mod exec;
pub mod index;
pub mod spectral;
pub mod symplectic;

pub use error::{Error, Result};
pub use exec::Execution;

//! Linearized monodromy, truncated index forms and the checks tying them to
//! the iteration formulas.

mod bott;
mod chain;
mod monodromy;
mod ode;
mod orbit;
mod qform;

pub use bott::{bott_check, BottReport, OmegaCount};
pub use chain::{
    analyze_orbit, annotate, cross_validate, nodes_for, ChainOptions, CrossRow, OrbitAnalysis,
};
pub use monodromy::{monodromy, MonodromyOptions, MonodromyResult};
pub use ode::{fundamental_solution, OdeOptions};
pub use orbit::{quadratic_hessian, OrbitInterpolant};
pub use qform::{
    build_qform, count_eigenvalues, index_nullity, roots_of_minus_one, OrbitData, QForm,
    SpectralCount, DEFAULT_ZERO_TOL,
};

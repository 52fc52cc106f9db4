//! Symplectic matrix algebra, basic normal forms and monodromy classification.

mod angle;
mod classify;
mod matrix;
mod normal_form;

pub use angle::Angle;
pub use classify::{classify, classify_with, ClassifyOptions, DEFAULT_CLUSTER_TOL};
pub(crate) use matrix::diamond_raw as matrix_diamond_raw;
pub use matrix::{
    diamond, elliptic_height, elliptic_height_with, is_symplectic, nullity_omega,
    nullity_omega_with, standard_j, SymplecticMatrix, DEFAULT_RANK_TOL, DEFAULT_SYMPLECTIC_TOL,
};
pub use normal_form::NormalFormBlock;

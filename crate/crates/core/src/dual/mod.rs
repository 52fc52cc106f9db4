//! Dual action on antiperiodic loops and recovery of symmetric closed characteristics.

mod action;
mod body;
mod characteristic;
mod checks;
mod hamiltonian;
mod loops;
mod minimize;
mod mollifier;
mod search;

pub use action::{coercivity, DualAction, DEFAULT_QUAD_NODES};
pub use body::{ConvexBody, Ellipsoid};
pub use characteristic::{
    critical_value_of_amplitude, distinct, image_distance, max_gauge_error, recover_characteristic,
    symmetry_error, ClosedCharacteristic, RecoverOptions, DEFAULT_ORBIT_TOL, DEFAULT_SAMPLES,
};
pub use checks::{functional_checks, smooth_random_loop, FunctionalReport};
pub use hamiltonian::{fenchel_dual, h_grad, h_hess, h_value, hamiltonian, DualParams};
pub use loops::AntiperiodicLoop;
pub use minimize::{minimize, CriticalPoint, MinimizeOptions};
pub use mollifier::{Mollifier, MollifierSpec};
pub use search::{
    find_characteristics, plane_seed, random_seed, SearchOptions, SearchOutcome, SeedKind,
    SeedReport,
};

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::action::{DualAction, DEFAULT_QUAD_NODES};
use super::body::ConvexBody;
use super::characteristic::{
    distinct, recover_characteristic, ClosedCharacteristic, RecoverOptions,
};
use super::hamiltonian::DualParams;
use super::loops::AntiperiodicLoop;
use super::minimize::{minimize, MinimizeOptions};
use crate::error::{Error, Result};
use crate::exec::Execution;

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub modes: usize,
    pub quad_nodes: usize,
    /// Random seeds in addition to one seed per coordinate plane.
    pub random_seeds: usize,
    pub rng_seed: u64,
    pub minimize: MinimizeOptions,
    pub recover: RecoverOptions,
    /// Orbits whose images are within this Hausdorff distance are identified.
    pub distinct_tol: f64,
    pub exec: Execution,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            modes: 128,
            quad_nodes: DEFAULT_QUAD_NODES,
            random_seeds: 4,
            rng_seed: 0,
            minimize: MinimizeOptions::default(),
            recover: RecoverOptions::default(),
            distinct_tol: 1e-3,
            exec: Execution::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum SeedKind {
    Plane(usize),
    Random(u64),
}

#[derive(Clone, Debug)]
pub struct SeedReport {
    pub kind: SeedKind,
    /// Period found, or the failure message.
    pub outcome: std::result::Result<f64, String>,
    pub iterations: usize,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    /// Geometrically distinct characteristics, by increasing period.
    pub characteristics: Vec<ClosedCharacteristic>,
    pub seeds: Vec<SeedReport>,
}

/// Amplitude at which `φ′(ρ)/ρ = 1/2`, a neutral starting size.
fn seed_amplitude(p: &DualParams) -> f64 {
    let (mut lo, mut hi) = (1e-9, 1.0);
    while p.mollifier.ratio(hi) > 0.5 {
        hi *= 2.0;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if p.mollifier.ratio(mid) > 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Circle seed in the `k`-th coordinate plane.
pub fn plane_seed(
    body: &dyn ConvexBody,
    p: &DualParams,
    modes: usize,
    plane: usize,
) -> Result<AntiperiodicLoop> {
    let mut u = AntiperiodicLoop::zeros(body.dim_half(), modes)?;
    let amp = 2.0 * PI * seed_amplitude(p) * body.extent(plane);
    u.set_coeff(1, plane, Complex64::new(0.0, amp))?;
    Ok(u)
}

/// Low-frequency random seed with the size of a plane seed.
pub fn random_seed(
    body: &dyn ConvexBody,
    p: &DualParams,
    modes: usize,
    seed: u64,
) -> Result<AntiperiodicLoop> {
    let n = body.dim_half();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = AntiperiodicLoop::zeros(n, modes)?;
    for k in [-5i64, -3, -1, 1, 3, 5] {
        if u.slot(k).is_none() {
            continue;
        }
        for i in 0..n {
            let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            u.set_coeff(k, i, z / (k.abs() as f64))?;
        }
    }
    let target = plane_seed(body, p, modes, 0)?.norm();
    Ok(u.scale(target / u.norm()))
}

/// Multi-start search for symmetric closed characteristics.
pub fn find_characteristics(
    body: &dyn ConvexBody,
    params: &DualParams,
    opts: &SearchOptions,
) -> Result<SearchOutcome> {
    let n = body.dim_half();
    let mut kinds: Vec<SeedKind> = (0..n).map(SeedKind::Plane).collect();
    kinds.extend(
        (0..opts.random_seeds as u64).map(|s| SeedKind::Random(opts.rng_seed.wrapping_add(s))),
    );

    // Parallelism goes over seeds; each action evaluates sequentially.
    let inner = if opts.exec.is_parallel() && kinds.len() > 1 {
        Execution::Sequential
    } else {
        opts.exec
    };
    let action = DualAction::new(body, *params, opts.modes, opts.quad_nodes, inner)?;
    let runs = opts.exec.map(
        &kinds,
        |kind| -> (Option<ClosedCharacteristic>, SeedReport) {
            let seed = match kind {
                SeedKind::Plane(k) => plane_seed(body, params, opts.modes, *k),
                SeedKind::Random(s) => random_seed(body, params, opts.modes, *s),
            };
            let res = seed
                .and_then(|s| minimize(&action, &s, &opts.minimize))
                .and_then(|cp| {
                    let it = cp.iterations;
                    recover_characteristic(&action, &cp, &opts.recover).map(|c| (c, it))
                });
            match res {
                Ok((c, it)) => {
                    let tau = c.tau;
                    (
                        Some(c),
                        SeedReport {
                            kind: kind.clone(),
                            outcome: Ok(tau),
                            iterations: it,
                        },
                    )
                }
                Err(e) => (
                    None,
                    SeedReport {
                        kind: kind.clone(),
                        outcome: Err(e.to_string()),
                        iterations: 0,
                    },
                ),
            }
        },
    );

    let mut found: Vec<ClosedCharacteristic> = Vec::new();
    let mut reports = Vec::new();
    let mut candidates: Vec<ClosedCharacteristic> = Vec::new();
    for (c, r) in runs {
        candidates.extend(c);
        reports.push(r);
    }
    candidates.sort_by(|a, b| a.tau.total_cmp(&b.tau));
    for c in candidates {
        if found.iter().all(|f| distinct(f, &c, opts.distinct_tol)) {
            found.push(c);
        }
    }
    if found.is_empty() {
        return Err(Error::NonConvergence {
            iterations: 0,
            grad_norm: f64::NAN,
            value: f64::NAN,
        });
    }
    Ok(SearchOutcome {
        characteristics: found,
        seeds: reports,
    })
}

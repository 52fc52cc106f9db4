use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::action::DualAction;
use super::loops::AntiperiodicLoop;
use crate::error::Result;

/// Worst relative defects of the structural identities of `Ψ_a` over random loops.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FunctionalReport {
    /// `|⟨Mu, v⟩ + ⟨u, Mv⟩| / (‖u‖‖v‖)`.
    pub antisymmetry: f64,
    /// `|Ψ(θ∗u) − Ψ(u)| / (1 + |Ψ(u)|)`.
    pub shift_invariance: f64,
    /// Central difference against `⟨Ψ′(u), v⟩`, step `1e-5`.
    pub gradient: f64,
}

impl FunctionalReport {
    pub fn pass(&self) -> bool {
        self.antisymmetry <= 1e-12 && self.shift_invariance <= 1e-8 && self.gradient <= 1e-6
    }
}

/// Loop with coefficients decaying like `1/k²`, scaled to norm `size`.
pub fn smooth_random_loop(
    rng: &mut impl Rng,
    n: usize,
    modes: usize,
    size: f64,
) -> Result<AntiperiodicLoop> {
    let mut u = AntiperiodicLoop::zeros(n, modes)?;
    for q in 0..modes {
        let k = u.frequency(q);
        for i in 0..n {
            let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            u.set_coeff(k, i, z / (k * k) as f64)?;
        }
    }
    let s = size / u.norm();
    Ok(u.scale(s))
}

/// Run `samples` trials of each identity at loops of norm `size`.
pub fn functional_checks(
    action: &DualAction,
    size: f64,
    samples: usize,
    seed: u64,
) -> Result<FunctionalReport> {
    let n = action.body().dim_half();
    let modes = action.modes();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = FunctionalReport {
        antisymmetry: 0.0,
        shift_invariance: 0.0,
        gradient: 0.0,
    };
    let h = 1e-5;
    for _ in 0..samples {
        let u = smooth_random_loop(&mut rng, n, modes, size)?;
        let v = smooth_random_loop(&mut rng, n, modes, 1.0)?;
        let anti =
            (u.m_operator().inner(&v) + u.inner(&v.m_operator())).abs() / (u.norm() * v.norm());
        rep.antisymmetry = rep.antisymmetry.max(anti);

        let base = action.value(&u)?;
        let shifted = action.value(&u.shift(rng.random_range(0.0..1.0)))?;
        rep.shift_invariance = rep
            .shift_invariance
            .max((shifted - base).abs() / (1.0 + base.abs()));

        let g = action.gradient(&u)?;
        let (mut up, mut um) = (u.clone(), u.clone());
        up.axpy(h, &v);
        um.axpy(-h, &v);
        let fd = (action.value(&up)? - action.value(&um)?) / (2.0 * h);
        let an = g.inner(&v);
        rep.gradient = rep
            .gradient
            .max((fd - an).abs() / an.abs().max(g.norm() * v.norm()));
    }
    Ok(rep)
}

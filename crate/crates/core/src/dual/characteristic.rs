use super::action::DualAction;
use super::body::ConvexBody;
use super::hamiltonian::DualParams;
use super::minimize::CriticalPoint;
use crate::error::{Error, Result};
use crate::symplectic::SymplecticMatrix;

pub const DEFAULT_ORBIT_TOL: f64 = 1e-6;
pub const DEFAULT_SAMPLES: usize = 2048;

/// A closed characteristic `ẏ = J j′(y)` on `Σ = j⁻¹(1)`, sampled at `N` uniform
/// times on `[0, τ)`.
#[derive(Clone, Debug)]
pub struct ClosedCharacteristic {
    pub tau: f64,
    /// Gauge of the loop `x = Mu`; `x(t) = ρ·y(τt)`.
    pub rho: f64,
    pub psi_value: f64,
    pub samples: Vec<Vec<f64>>,
    pub symmetric: bool,
    /// `max_t ‖y(t + τ/2) + y(t)‖_∞`.
    pub symmetry_error: f64,
    /// `max_t |j(y(t)) − 1|`.
    pub gauge_error: f64,
    pub monodromy: Option<SymplecticMatrix>,
    pub index: Option<i64>,
    pub nullity: Option<i64>,
}

#[derive(Clone, Copy, Debug)]
pub struct RecoverOptions {
    pub orbit_tol: f64,
    pub samples: usize,
}

impl Default for RecoverOptions {
    fn default() -> Self {
        Self {
            orbit_tol: DEFAULT_ORBIT_TOL,
            samples: DEFAULT_SAMPLES,
        }
    }
}

/// Critical value of a critical point whose loop `x = Mu` has gauge `ρ`:
/// `(a/4) φ′(ρ) ρ − (a/2) φ(ρ)`, strictly decreasing from 0.
pub fn critical_value_of_amplitude(p: &DualParams, rho: f64) -> f64 {
    let (v, d1, _) = p.mollifier.eval_unchecked(rho);
    0.25 * p.a * d1 * rho - 0.5 * p.a * v
}

fn amplitude_of_critical_value(p: &DualParams, psi: f64) -> Result<f64> {
    if !(psi < 0.0) {
        return Err(Error::Recovery(format!(
            "critical value {psi} is not negative"
        )));
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while critical_value_of_amplitude(p, hi) > psi {
        lo = hi;
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::Recovery("critical value out of range".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if critical_value_of_amplitude(p, mid) > psi {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Turn a nontrivial critical point of `Ψ_a` into a closed characteristic.
///
/// `x = Mu` solves the fixed-period problem with `j(x) ≡ ρ`. The amplitude is
/// read off the critical value, which is second-order accurate, and checked
/// against the gauge of `x`.
pub fn recover_characteristic(
    action: &DualAction,
    cp: &CriticalPoint,
    opts: &RecoverOptions,
) -> Result<ClosedCharacteristic> {
    let body = action.body();
    let p = action.params();
    let x = cp.point.m_operator();
    let xs = x.sample(opts.samples)?;
    let gauges: Vec<f64> = xs.iter().map(|v| body.gauge(v)).collect();
    let mean = gauges.iter().sum::<f64>() / gauges.len() as f64;
    let spread = gauges.iter().map(|g| (g - mean).abs()).fold(0.0, f64::max) / mean;
    if spread > opts.orbit_tol {
        return Err(Error::Recovery(format!(
            "gauge of Mu varies by {spread:.3e} along the loop"
        )));
    }
    let rho = amplitude_of_critical_value(p, cp.value)?;
    if (rho - mean).abs() > opts.orbit_tol * rho {
        return Err(Error::Recovery(format!(
            "amplitude from critical value {rho} disagrees with gauge {mean}"
        )));
    }
    let tau = p.period_of_amplitude(rho);
    let samples: Vec<Vec<f64>> = xs
        .iter()
        .map(|v| v.iter().map(|c| c / rho).collect())
        .collect();
    let gauge_error = samples
        .iter()
        .map(|v| (body.gauge(v) - 1.0).abs())
        .fold(0.0, f64::max);
    let symmetry_error = symmetry_error(&samples);
    Ok(ClosedCharacteristic {
        tau,
        rho,
        psi_value: cp.value,
        symmetric: symmetry_error <= opts.orbit_tol,
        symmetry_error,
        gauge_error,
        samples,
        monodromy: None,
        index: None,
        nullity: None,
    })
}

/// `max_j ‖y_{j+N/2} + y_j‖_∞` for an even sample count.
pub fn symmetry_error(samples: &[Vec<f64>]) -> f64 {
    let half = samples.len() / 2;
    (0..half)
        .map(|j| {
            samples[j]
                .iter()
                .zip(&samples[j + half])
                .map(|(a, b)| (a + b).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

fn point_segment(p: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let mut ab2 = 0.0;
    let mut ap_ab = 0.0;
    for k in 0..p.len() {
        let ab = b[k] - a[k];
        ab2 += ab * ab;
        ap_ab += (p[k] - a[k]) * ab;
    }
    let s = if ab2 > 0.0 {
        (ap_ab / ab2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (0..p.len())
        .map(|k| {
            let d = p[k] - (a[k] + s * (b[k] - a[k]));
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

fn directed_hausdorff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let m = b.len();
    a.iter()
        .map(|p| {
            (0..m)
                .map(|j| point_segment(p, &b[j], &b[(j + 1) % m]))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Hausdorff distance between the images of two sampled closed curves.
pub fn image_distance(c1: &ClosedCharacteristic, c2: &ClosedCharacteristic) -> f64 {
    directed_hausdorff(&c1.samples, &c2.samples).max(directed_hausdorff(&c2.samples, &c1.samples))
}

/// Geometrically distinct: the orbit images are more than `tol` apart.
pub fn distinct(c1: &ClosedCharacteristic, c2: &ClosedCharacteristic, tol: f64) -> bool {
    image_distance(c1, c2) > tol
}

/// Evaluate `j` on every sample; used to audit characteristics read from disk.
pub fn max_gauge_error(body: &dyn ConvexBody, samples: &[Vec<f64>]) -> f64 {
    samples
        .iter()
        .map(|v| (body.gauge(v) - 1.0).abs())
        .fold(0.0, f64::max)
}

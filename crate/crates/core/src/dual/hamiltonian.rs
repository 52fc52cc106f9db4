use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use super::body::{ConvexBody, Ellipsoid};
use super::mollifier::{Mollifier, MollifierSpec};
use crate::error::{Error, Result};

/// Period cap `a` together with the mollifier defining `H_a = a·φ(j)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualParams {
    pub a: f64,
    pub mollifier: Mollifier,
}

impl DualParams {
    pub fn new(a: f64, spec: MollifierSpec) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Invalid(format!(
                "period cap a = {a} must be positive"
            )));
        }
        Ok(Self {
            a,
            mollifier: Mollifier::new(spec)?,
        })
    }

    /// `a = 4π·max r_k²`, safely above every planar period `2π r_k²`.
    pub fn for_ellipsoid(body: &Ellipsoid, spec: MollifierSpec) -> Result<Self> {
        let rmax = body.semi_axes().iter().copied().fold(0.0, f64::max);
        Self::new(4.0 * PI * rmax * rmax, spec)
    }

    /// Conjugate exponent `β = α/(α−1)`.
    pub fn beta(&self) -> f64 {
        let a = self.mollifier.spec().alpha;
        a / (a - 1.0)
    }

    /// Constant `c₁` in `G_a(μ j′(z)) = c₁ μ^β` on the homogeneous band.
    pub fn dual_constant(&self) -> f64 {
        let MollifierSpec { alpha, c, .. } = self.mollifier.spec();
        (1.0 - 1.0 / alpha) * (self.a * c * alpha).powf(-1.0 / (alpha - 1.0))
    }

    /// Period of the orbit whose loop has gauge amplitude `ρ`: `a·φ′(ρ)/ρ`.
    pub fn period_of_amplitude(&self, rho: f64) -> f64 {
        self.a * self.mollifier.ratio(rho)
    }

    /// Warnings for a target period that the mollified problem resolves poorly.
    pub fn warnings(&self, target_period: f64) -> Vec<String> {
        let mut w = Vec::new();
        if target_period >= self.a {
            w.push(format!(
                "period cap a = {} does not exceed target period {target_period}",
                self.a
            ));
        }
        let cap = self.mollifier.ratio_at_infinity();
        if target_period / self.a <= cap {
            w.push(format!(
                "target period ratio {} is below the mollifier cap {cap}",
                target_period / self.a
            ));
        }
        w
    }
}

/// `H_a(x)`.
pub fn h_value(body: &dyn ConvexBody, p: &DualParams, x: &[f64]) -> f64 {
    p.a * p.mollifier.eval_unchecked(body.gauge(x)).0
}

/// `H_a′(x) = a φ′(j) j′(x)`; zero at the origin.
pub fn h_grad(body: &dyn ConvexBody, p: &DualParams, x: &[f64], out: &mut [f64]) {
    let j = body.gauge(x);
    if j == 0.0 {
        out.iter_mut().for_each(|o| *o = 0.0);
        return;
    }
    body.gauge_grad(x, out);
    let s = p.a * p.mollifier.eval_unchecked(j).1;
    out.iter_mut().for_each(|o| *o *= s);
}

/// `H_a″(x) = a(φ″(j) j′j′ᵀ + φ′(j) j″)`, row-major.
pub fn h_hess(body: &dyn ConvexBody, p: &DualParams, x: &[f64], out: &mut [f64]) -> Result<()> {
    let d = x.len();
    let j = body.gauge(x);
    if j == 0.0 {
        return Err(Error::SingularPoint("Hessian of H_a at the origin".into()));
    }
    let (_, d1, d2) = p.mollifier.eval_unchecked(j);
    let mut g = vec![0.0; d];
    body.gauge_grad(x, &mut g);
    body.gauge_hess(x, out);
    for a in 0..d {
        for b in 0..d {
            out[a * d + b] = p.a * (d2 * g[a] * g[b] + d1 * out[a * d + b]);
        }
    }
    Ok(())
}

/// `(H, H′, H″)` at `x`.
pub fn hamiltonian(
    body: &dyn ConvexBody,
    p: &DualParams,
    x: &[f64],
) -> Result<(f64, Vec<f64>, Vec<f64>)> {
    let d = x.len();
    let mut g = vec![0.0; d];
    let mut h = vec![0.0; d * d];
    h_grad(body, p, x, &mut g);
    h_hess(body, p, x, &mut h)?;
    Ok((h_value(body, p, x), g, h))
}

const NEWTON_MAX: usize = 100;

/// `G_a(y) = sup_x (x·y − H_a(x))` and its gradient, the maximiser `x`.
pub fn fenchel_dual(body: &dyn ConvexBody, p: &DualParams, y: &[f64]) -> Result<(f64, Vec<f64>)> {
    let mut x = vec![0.0; y.len()];
    let g = fenchel_into(body, p, y, &mut x)?;
    Ok((g, x))
}

pub(crate) fn fenchel_into(
    body: &dyn ConvexBody,
    p: &DualParams,
    y: &[f64],
    x: &mut [f64],
) -> Result<f64> {
    let d = y.len();
    let ynorm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    if ynorm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return Ok(0.0);
    }
    // Radial start: maximise along the ray through y.
    let jv = body.gauge(y) / ynorm;
    let t = p.mollifier.inverse_derivative(ynorm / (p.a * jv));
    let s = t / jv / ynorm;
    for (xi, yi) in x.iter_mut().zip(y) {
        *xi = s * yi;
    }

    let tol = 1e-13 * (1.0 + ynorm);
    let mut grad = vec![0.0; d];
    let mut hess = vec![0.0; d * d];
    let mut trial = vec![0.0; d];
    let objective = |x: &[f64]| -> f64 {
        x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() - h_value(body, p, x)
    };
    let mut f = objective(x);
    let mut residual = f64::INFINITY;
    for _ in 0..NEWTON_MAX {
        h_grad(body, p, x, &mut grad);
        for (g, yi) in grad.iter_mut().zip(y) {
            *g -= yi;
        }
        residual = grad.iter().map(|v| v * v).sum::<f64>().sqrt();
        if residual <= tol {
            return Ok(f);
        }
        h_hess(body, p, x, &mut hess)?;
        let hm = DMatrix::from_row_slice(d, d, &hess);
        let rhs = DVector::from_column_slice(&grad);
        let step = match hm.cholesky() {
            Some(ch) => ch.solve(&rhs),
            None => rhs.clone(),
        };
        let mut lam = 1.0;
        loop {
            for k in 0..d {
                trial[k] = x[k] - lam * step[k];
            }
            let ft = objective(&trial);
            if ft >= f - 1e-15 * f.abs().max(1.0) || lam < 1e-12 {
                x.copy_from_slice(&trial);
                f = ft;
                break;
            }
            lam *= 0.5;
        }
    }
    Err(Error::DualEval {
        iterations: NEWTON_MAX,
        residual,
    })
}

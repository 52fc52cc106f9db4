use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::body::ConvexBody;
use super::hamiltonian::{fenchel_into, DualParams};
use super::loops::AntiperiodicLoop;
use crate::error::{Error, Result};
use crate::exec::Execution;

/// Default number of trapezoid nodes on `[0, 1/2)`.
pub const DEFAULT_QUAD_NODES: usize = 1024;

/// Discretised dual action
/// `Ψ_a(u) = ∫₀^{1/2} ½ Ju·Mu + G_a(−Ju) dt`.
///
/// The quadratic term is exact in Fourier space: `−(1/8π) Σ_k |x_k|²/k`.
/// The `G_a` term uses the trapezoid rule on `nodes` equispaced points.
pub struct DualAction<'a> {
    body: &'a dyn ConvexBody,
    params: DualParams,
    modes: usize,
    nodes: usize,
    exec: Execution,
    inverse: Arc<dyn Fft<f64>>,
    forward: Arc<dyn Fft<f64>>,
}

/// Nodes per parallel work item.
const CHUNK: usize = 64;

impl<'a> DualAction<'a> {
    pub fn new(
        body: &'a dyn ConvexBody,
        params: DualParams,
        modes: usize,
        nodes: usize,
        exec: Execution,
    ) -> Result<Self> {
        if nodes < 4 * modes {
            return Err(Error::Resolution {
                nodes,
                modes,
                required: 4 * modes,
            });
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            body,
            params,
            modes,
            nodes,
            exec,
            inverse: planner.plan_fft_inverse(nodes),
            forward: planner.plan_fft_forward(nodes),
        })
    }

    pub fn params(&self) -> &DualParams {
        &self.params
    }

    pub fn body(&self) -> &dyn ConvexBody {
        self.body
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    fn check(&self, u: &AntiperiodicLoop) -> Result<()> {
        if u.modes() != self.modes || u.dim_half() != self.body.dim_half() {
            return Err(Error::Dimension(format!(
                "loop has (n, modes) = ({}, {}), action expects ({}, {})",
                u.dim_half(),
                u.modes(),
                self.body.dim_half(),
                self.modes
            )));
        }
        Ok(())
    }

    /// `½⟨Ju, Mu⟩`.
    pub fn quadratic(&self, u: &AntiperiodicLoop) -> f64 {
        let n = u.dim_half();
        (0..u.modes())
            .map(|q| {
                let k = u.frequency(q) as f64;
                let s: f64 = u.coeffs()[q * n..(q + 1) * n]
                    .iter()
                    .map(|z| z.norm_sqr())
                    .sum();
                -s / (8.0 * PI * k)
            })
            .sum()
    }

    /// `−Ju(t_j)` at `t_j = j/(2·nodes)`, row-major `nodes × 2n`.
    fn dual_points(&self, u: &AntiperiodicLoop) -> Vec<f64> {
        let n = u.dim_half();
        let nq = self.nodes;
        let mut w = vec![0.0; nq * 2 * n];
        let mut buf = vec![Complex64::new(0.0, 0.0); nq];
        for i in 0..n {
            buf.iter_mut().for_each(|b| *b = Complex64::new(0.0, 0.0));
            for q in 0..u.modes() {
                let l = (u.frequency(q) - 1) / 2;
                buf[l.rem_euclid(nq as i64) as usize] = u.coeffs()[q * n + i];
            }
            self.inverse.process(&mut buf);
            for (j, z) in buf.iter().enumerate() {
                let z = z * Complex64::from_polar(1.0, PI * j as f64 / nq as f64);
                // −i·z
                w[j * 2 * n + i] = z.im;
                w[j * 2 * n + n + i] = -z.re;
            }
        }
        w
    }

    /// `G_a` and `G_a′` at every node.
    fn dual_values(&self, w: &[f64], d: usize) -> Result<(Vec<f64>, Vec<f64>)> {
        let nq = self.nodes;
        let chunks = nq.div_ceil(CHUNK);
        let parts = self
            .exec
            .map_range(chunks, |c| -> Result<(Vec<f64>, Vec<f64>)> {
                let lo = c * CHUNK;
                let hi = (lo + CHUNK).min(nq);
                let mut g = Vec::with_capacity(hi - lo);
                let mut x = vec![0.0; (hi - lo) * d];
                for j in lo..hi {
                    let xs = &mut x[(j - lo) * d..(j - lo + 1) * d];
                    g.push(fenchel_into(
                        self.body,
                        &self.params,
                        &w[j * d..(j + 1) * d],
                        xs,
                    )?);
                }
                Ok((g, x))
            });
        let mut gs = Vec::with_capacity(nq);
        let mut xs = Vec::with_capacity(nq * d);
        for p in parts {
            let (g, x) = p?;
            gs.extend(g);
            xs.extend(x);
        }
        Ok((gs, xs))
    }

    /// `Ψ_a(u)`.
    pub fn value(&self, u: &AntiperiodicLoop) -> Result<f64> {
        self.check(u)?;
        let d = 2 * u.dim_half();
        let w = self.dual_points(u);
        let (g, _) = self.dual_values(&w, d)?;
        Ok(self.quadratic(u) + g.iter().sum::<f64>() / (2.0 * self.nodes as f64))
    }

    /// `Ψ_a(u)` and its gradient with respect to the Euclidean structure on the
    /// coefficients `x_k`. The `L²` gradient is twice this.
    pub fn value_and_coeff_grad(&self, u: &AntiperiodicLoop) -> Result<(f64, AntiperiodicLoop)> {
        self.check(u)?;
        let n = u.dim_half();
        let d = 2 * n;
        let nq = self.nodes;
        let w = self.dual_points(u);
        let (g, x) = self.dual_values(&w, d)?;
        let value = self.quadratic(u) + g.iter().sum::<f64>() / (2.0 * nq as f64);

        let mut grad = AntiperiodicLoop::zeros(n, u.modes())?;
        let mut buf = vec![Complex64::new(0.0, 0.0); nq];
        let weight = 1.0 / (2.0 * nq as f64);
        for i in 0..n {
            for (j, b) in buf.iter_mut().enumerate() {
                let gc = Complex64::new(x[j * d + i], x[j * d + n + i]);
                *b = Complex64::new(0.0, 1.0)
                    * gc
                    * Complex64::from_polar(1.0, -PI * j as f64 / nq as f64);
            }
            self.forward.process(&mut buf);
            for q in 0..u.modes() {
                let k = u.frequency(q);
                let l = (k - 1) / 2;
                let quad = -u.coeffs()[q * n + i] / (4.0 * PI * k as f64);
                grad.coeffs_mut()[q * n + i] =
                    quad + buf[l.rem_euclid(nq as i64) as usize] * weight;
            }
        }
        Ok((value, grad))
    }

    /// `L²` gradient `Ψ_a′(u)`.
    pub fn gradient(&self, u: &AntiperiodicLoop) -> Result<AntiperiodicLoop> {
        Ok(self.value_and_coeff_grad(u)?.1.scale(2.0))
    }

    /// Constants `(C₁, C)` with `Ψ_a(u) ≥ C₁‖u‖² − C` for every loop.
    pub fn coercivity(&self) -> (f64, f64) {
        coercivity(self.body, &self.params)
    }
}

/// `(C₁, C)` with `Ψ_a(u) ≥ C₁‖u‖² − C`.
///
/// From `φ(t) ≤ κt²/2 + C_φ` with `κ` twice the limiting ratio of `φ′(t)/t`,
/// `H_a(x) ≤ ε|x|²/2 + aC_φ` with `ε = aκ/r²` (`r` the inradius), so
/// `G_a(y) ≥ |y|²/2ε − aC_φ`. The quadratic term is at least `−‖u‖²/4π`.
pub fn coercivity(body: &dyn ConvexBody, p: &DualParams) -> (f64, f64) {
    let kappa = 2.0 * p.mollifier.ratio_at_infinity();
    let (_, t1) = p.mollifier.joins();
    let mut c_phi: f64 = 0.0;
    let mut t = 1e-6;
    while t < 1e4 * t1 {
        let v = p.mollifier.eval_unchecked(t).0 - 0.5 * kappa * t * t;
        c_phi = c_phi.max(v);
        t *= 1.001;
    }
    // grid safety margin
    c_phi *= 1.01;
    let r = body.inradius();
    let eps = p.a * kappa / (r * r);
    (1.0 / (2.0 * eps) - 1.0 / (4.0 * PI), 0.5 * p.a * c_phi)
}

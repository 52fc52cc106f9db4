use super::action::DualAction;
use super::loops::AntiperiodicLoop;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct MinimizeOptions {
    /// Stop once `‖Ψ′(u)‖_{L²} ≤ grad_tol`.
    pub grad_tol: f64,
    pub max_iter: usize,
    /// L-BFGS history length.
    pub memory: usize,
    /// Limits below this `L²` norm count as the trivial critical point.
    pub amp_tol: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            grad_tol: 1e-9,
            max_iter: 5000,
            memory: 12,
            amp_tol: 1e-6,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CriticalPoint {
    pub point: AntiperiodicLoop,
    pub value: f64,
    pub grad_norm: f64,
    pub iterations: usize,
    /// Accepted values, one per iteration, starting with the seed.
    pub trace: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Relative size of the band within which two evaluations of `Ψ_a` are
/// indistinguishable.
const VALUE_NOISE: f64 = 1e-13;

/// Limited-memory BFGS descent from `seed`.
///
/// Steps satisfy the Armijo condition, except inside the rounding band of `Ψ_a`
/// where a step is accepted when it halves the directional derivative without
/// raising the value by more than the band.
pub fn minimize(
    action: &DualAction,
    seed: &AntiperiodicLoop,
    opts: &MinimizeOptions,
) -> Result<CriticalPoint> {
    if seed.norm() == 0.0 {
        return Err(Error::Invalid("seed loop is zero".into()));
    }
    let (n, modes) = (seed.dim_half(), seed.modes());
    let to_loop = |v: &[f64]| AntiperiodicLoop::from_real(n, modes, v);
    // ‖L² gradient‖_{L²} = √2 |coefficient gradient|
    let l2 = |g: &[f64]| (2.0 * dot(g, g)).sqrt();

    let mut x = seed.to_real();
    let (mut f, g0) = action.value_and_coeff_grad(seed)?;
    let mut g = g0.to_real();
    let mut trace = vec![f];
    let mut hist: std::collections::VecDeque<(Vec<f64>, Vec<f64>, f64)> = Default::default();

    for iter in 0..opts.max_iter {
        let gnorm = l2(&g);
        if gnorm <= opts.grad_tol {
            let point = to_loop(&x)?;
            let norm = point.norm();
            if norm < opts.amp_tol {
                return Err(Error::TrivialLimit { norm });
            }
            return Ok(CriticalPoint {
                point,
                value: f,
                grad_norm: gnorm,
                iterations: iter,
                trace,
            });
        }

        let mut accepted = None;
        for attempt in 0..2 {
            if attempt == 1 {
                if hist.is_empty() {
                    break;
                }
                hist.clear();
            }
            let d = direction(&g, &hist);
            let gd = dot(&g, &d);
            if !(gd < 0.0) {
                hist.clear();
                continue;
            }
            let mut alpha = if hist.is_empty() {
                (1.0 / dot(&d, &d).sqrt()).min(1.0)
            } else {
                1.0
            };
            let noise = VALUE_NOISE * (1.0 + f.abs());
            for _ in 0..60 {
                let xt: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + alpha * b).collect();
                let (ft, gt) = action.value_and_coeff_grad(&to_loop(&xt)?)?;
                let gt = gt.to_real();
                let armijo = ft <= f + 1e-4 * alpha * gd;
                let banded = ft <= f + noise && dot(&gt, &d).abs() <= 0.5 * gd.abs();
                if armijo || banded {
                    accepted = Some((xt, ft, gt));
                    break;
                }
                alpha *= 0.5;
            }
            if accepted.is_some() {
                break;
            }
        }
        let Some((xt, ft, gt)) = accepted else {
            return Err(Error::NonConvergence {
                iterations: iter,
                grad_norm: gnorm,
                value: f,
            });
        };
        let s: Vec<f64> = xt.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gt.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            if hist.len() == opts.memory {
                hist.pop_front();
            }
            hist.push_back((s, y, 1.0 / sy));
        }
        x = xt;
        f = ft;
        g = gt;
        trace.push(f);
    }
    Err(Error::NonConvergence {
        iterations: opts.max_iter,
        grad_norm: l2(&g),
        value: f,
    })
}

/// Two-loop recursion: `−H g` for the implicit inverse Hessian `H`.
fn direction(g: &[f64], hist: &std::collections::VecDeque<(Vec<f64>, Vec<f64>, f64)>) -> Vec<f64> {
    let mut q = g.to_vec();
    let mut alphas = Vec::with_capacity(hist.len());
    for (s, y, rho) in hist.iter().rev() {
        let a = rho * dot(s, &q);
        q.iter_mut().zip(y).for_each(|(qi, yi)| *qi -= a * yi);
        alphas.push(a);
    }
    if let Some((s, y, _)) = hist.back() {
        let gamma = dot(s, y) / dot(y, y);
        q.iter_mut().for_each(|v| *v *= gamma);
    }
    for ((s, y, rho), a) in hist.iter().zip(alphas.iter().rev()) {
        let b = rho * dot(y, &q);
        q.iter_mut().zip(s).for_each(|(qi, si)| *qi += (a - b) * si);
    }
    q.iter_mut().for_each(|v| *v = -*v);
    q
}

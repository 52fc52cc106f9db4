use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::dual::ConvexBody;
use crate::error::{Error, Result};

/// Trigonometric interpolant of a periodic orbit sampled uniformly on `[0, τ)`.
#[derive(Clone, Debug)]
pub struct OrbitInterpolant {
    tau: f64,
    dim: usize,
    terms: Vec<(i64, Vec<Complex64>)>,
}

impl OrbitInterpolant {
    pub fn from_samples(samples: &[Vec<f64>], tau: f64) -> Result<Self> {
        let count = samples.len();
        if count < 4 || !count.is_multiple_of(2) {
            return Err(Error::Invalid(format!(
                "need an even number ≥ 4 of samples, got {count}"
            )));
        }
        if !(tau > 0.0) {
            return Err(Error::Invalid(format!(
                "period must be positive, got {tau}"
            )));
        }
        let dim = samples[0].len();
        if samples.iter().any(|s| s.len() != dim) {
            return Err(Error::Dimension("orbit samples of unequal length".into()));
        }
        let fft = FftPlanner::new().plan_fft_forward(count);
        let mut spectra = vec![vec![Complex64::new(0.0, 0.0); count]; dim];
        for (c, spec) in spectra.iter_mut().enumerate() {
            for (j, s) in samples.iter().enumerate() {
                spec[j] = Complex64::new(s[c] / count as f64, 0.0);
            }
            fft.process(spec);
        }
        let scale = spectra
            .iter()
            .flat_map(|s| s.iter().map(|z| z.norm()))
            .fold(0.0, f64::max);
        let mut terms = Vec::new();
        for f in 0..count {
            let k = if f <= count / 2 {
                f as i64
            } else {
                f as i64 - count as i64
            };
            let mut coeff: Vec<Complex64> = spectra.iter().map(|s| s[f]).collect();
            if f == count / 2 {
                // Split the Nyquist term evenly so the interpolant stays real.
                coeff.iter_mut().for_each(|z| *z *= 0.5);
                if coeff.iter().any(|z| z.norm() > 1e-15 * scale) {
                    terms.push((-k, coeff.clone()));
                }
            }
            if coeff.iter().any(|z| z.norm() > 1e-15 * scale) {
                terms.push((k, coeff));
            }
        }
        Ok(Self { tau, dim, terms })
    }

    pub fn period(&self) -> f64 {
        self.tau
    }

    pub fn eval(&self, s: f64) -> Vec<f64> {
        self.eval_derivative(s, 0)
    }

    /// `order`-th time derivative at `s`.
    pub fn eval_derivative(&self, s: f64, order: u32) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (k, c) in &self.terms {
            let w = 2.0 * PI * *k as f64 / self.tau;
            let e = Complex64::from_polar(1.0, w * s) * Complex64::new(0.0, w).powu(order);
            for (o, z) in out.iter_mut().zip(c) {
                *o += (e * z).re;
            }
        }
        out
    }
}

/// Hessian of `j²/2` at a point of `Σ`: `j′j′ᵀ + j″`, row-major.
pub fn quadratic_hessian(body: &dyn ConvexBody, y: &[f64], out: &mut [f64]) {
    let d = y.len();
    let j = body.gauge(y);
    let mut g = vec![0.0; d];
    body.gauge_grad(y, &mut g);
    body.gauge_hess(y, out);
    for a in 0..d {
        for b in 0..d {
            out[a * d + b] = g[a] * g[b] + j * out[a * d + b];
        }
    }
}

/// `J·H` for a row-major `2n×2n` matrix `H`.
pub(crate) fn j_times(h: &[f64], out: &mut [f64], n: usize) {
    let d = 2 * n;
    for i in 0..n {
        for c in 0..d {
            out[i * d + c] = -h[(n + i) * d + c];
            out[(n + i) * d + c] = h[i * d + c];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_a_circle() {
        let tau = 2.7;
        let n = 64;
        let samples: Vec<Vec<f64>> = (0..n)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / n as f64;
                vec![t.cos(), 0.3 * (2.0 * t).sin()]
            })
            .collect();
        let orbit = OrbitInterpolant::from_samples(&samples, tau).unwrap();
        let s = 0.37;
        let t = 2.0 * PI * s / tau;
        let y = orbit.eval(s);
        let dy = orbit.eval_derivative(s, 1);
        assert!((y[0] - t.cos()).abs() < 1e-13);
        assert!((y[1] - 0.3 * (2.0 * t).sin()).abs() < 1e-13);
        let w = 2.0 * PI / tau;
        assert!((dy[0] + w * t.sin()).abs() < 1e-12);
        assert!((dy[1] - 0.6 * w * (2.0 * t).cos()).abs() < 1e-12);
    }
}

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Antiperiodic loop `u(t) = Σ_k e^{2kπJt} x_k` over odd `k`, truncated to
/// `modes` frequencies `k = −modes+1, …, −1, 1, …, modes−1`.
///
/// Each `x_k ∈ R^{2n}` is stored per plane as `ζ = x_i + i·x_{i+n}`, so that
/// `J` acts as multiplication by `i` and `e^{2kπJt}` as `e^{2πikt}`.
/// The norm is `L²` over `[0, 1/2]`: `‖u‖² = ½ Σ_k |x_k|²`.
#[derive(Clone, Debug, PartialEq)]
pub struct AntiperiodicLoop {
    n: usize,
    modes: usize,
    coeffs: Vec<Complex64>,
}

impl AntiperiodicLoop {
    pub fn zeros(n: usize, modes: usize) -> Result<Self> {
        if n == 0 || modes < 2 || !modes.is_multiple_of(2) {
            return Err(Error::Invalid(format!(
                "loop needs n ≥ 1 and an even mode count ≥ 2 (got n = {n}, modes = {modes})"
            )));
        }
        Ok(Self {
            n,
            modes,
            coeffs: vec![Complex64::new(0.0, 0.0); n * modes],
        })
    }

    pub fn dim_half(&self) -> usize {
        self.n
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    /// Odd frequency of slot `q`.
    pub fn frequency(&self, q: usize) -> i64 {
        2 * q as i64 - self.modes as i64 + 1
    }

    pub fn slot(&self, k: i64) -> Option<usize> {
        if k % 2 == 0 || k.unsigned_abs() as usize >= self.modes {
            return None;
        }
        Some(((k + self.modes as i64 - 1) / 2) as usize)
    }

    pub fn coeff(&self, k: i64, plane: usize) -> Complex64 {
        self.slot(k)
            .map(|q| self.coeffs[q * self.n + plane])
            .unwrap_or_default()
    }

    pub fn set_coeff(&mut self, k: i64, plane: usize, v: Complex64) -> Result<()> {
        let q = self
            .slot(k)
            .ok_or_else(|| Error::Domain(format!("frequency {k} outside the truncation")))?;
        self.coeffs[q * self.n + plane] = v;
        Ok(())
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Real coordinates `(x_k)` stacked by slot, each as `(x₁..xₙ, y₁..yₙ)`.
    pub fn to_real(&self) -> Vec<f64> {
        let mut v = vec![0.0; 2 * self.coeffs.len()];
        for q in 0..self.modes {
            for i in 0..self.n {
                let z = self.coeffs[q * self.n + i];
                v[q * 2 * self.n + i] = z.re;
                v[q * 2 * self.n + self.n + i] = z.im;
            }
        }
        v
    }

    pub fn from_real(n: usize, modes: usize, v: &[f64]) -> Result<Self> {
        let mut u = Self::zeros(n, modes)?;
        if v.len() != 2 * n * modes {
            return Err(Error::Dimension(format!(
                "expected {} real coordinates, got {}",
                2 * n * modes,
                v.len()
            )));
        }
        for q in 0..modes {
            for i in 0..n {
                u.coeffs[q * n + i] = Complex64::new(v[q * 2 * n + i], v[q * 2 * n + n + i]);
            }
        }
        Ok(u)
    }

    fn map_slots(&self, f: impl Fn(i64, Complex64) -> Complex64) -> Self {
        let mut out = self.clone();
        for q in 0..self.modes {
            let k = self.frequency(q);
            for i in 0..self.n {
                out.coeffs[q * self.n + i] = f(k, self.coeffs[q * self.n + i]);
            }
        }
        out
    }

    /// `Mu`, the antiperiodic primitive: `x_k ↦ −(1/2πk) J x_k`.
    pub fn m_operator(&self) -> Self {
        self.map_slots(|k, z| Complex64::new(0.0, -1.0 / (2.0 * PI * k as f64)) * z)
    }

    /// Derivative `u̇`: `x_k ↦ 2πk J x_k`.
    pub fn derivative(&self) -> Self {
        self.map_slots(|k, z| Complex64::new(0.0, 2.0 * PI * k as f64) * z)
    }

    /// `Ju`.
    pub fn apply_j(&self) -> Self {
        self.map_slots(|_, z| Complex64::new(0.0, 1.0) * z)
    }

    /// Time shift `(θ∗u)(t) = u(t + θ)`: `x_k ↦ e^{2kπJθ} x_k`.
    pub fn shift(&self, theta: f64) -> Self {
        self.map_slots(|k, z| Complex64::from_polar(1.0, 2.0 * PI * k as f64 * theta) * z)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map_slots(|_, z| z * s)
    }

    pub fn axpy(&mut self, s: f64, other: &Self) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += *b * s;
        }
    }

    /// `⟨u, v⟩ = ∫₀^{1/2} u·v dt`.
    pub fn inner(&self, other: &Self) -> f64 {
        0.5 * self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a * b.conj()).re)
            .sum::<f64>()
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).sqrt()
    }

    /// `u(t)` as a real `2n` vector.
    pub fn eval(&self, t: f64) -> Vec<f64> {
        let mut z = vec![Complex64::new(0.0, 0.0); self.n];
        for q in 0..self.modes {
            let e = Complex64::from_polar(1.0, 2.0 * PI * self.frequency(q) as f64 * t);
            for i in 0..self.n {
                z[i] += e * self.coeffs[q * self.n + i];
            }
        }
        let mut v = vec![0.0; 2 * self.n];
        for i in 0..self.n {
            v[i] = z[i].re;
            v[self.n + i] = z[i].im;
        }
        v
    }

    /// Values at `t_j = j/count`, `j = 0..count`, over one full period.
    pub fn sample(&self, count: usize) -> Result<Vec<Vec<f64>>> {
        if count < 2 * self.modes {
            return Err(Error::Resolution {
                nodes: count,
                modes: self.modes,
                required: 2 * self.modes,
            });
        }
        let fft = FftPlanner::new().plan_fft_inverse(count);
        let mut out = vec![vec![0.0; 2 * self.n]; count];
        let mut buf = vec![Complex64::new(0.0, 0.0); count];
        for i in 0..self.n {
            buf.iter_mut().for_each(|b| *b = Complex64::new(0.0, 0.0));
            for q in 0..self.modes {
                let k = self.frequency(q);
                buf[k.rem_euclid(count as i64) as usize] = self.coeffs[q * self.n + i];
            }
            fft.process(&mut buf);
            for (j, z) in buf.iter().enumerate() {
                out[j][i] = z.re;
                out[j][self.n + i] = z.im;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loop_with(modes: &[(i64, usize, Complex64)]) -> AntiperiodicLoop {
        let mut u = AntiperiodicLoop::zeros(2, 8).unwrap();
        for &(k, i, z) in modes {
            u.set_coeff(k, i, z).unwrap();
        }
        u
    }

    #[test]
    fn slots_and_frequencies() {
        let u = AntiperiodicLoop::zeros(1, 8).unwrap();
        let ks: Vec<i64> = (0..8).map(|q| u.frequency(q)).collect();
        assert_eq!(ks, vec![-7, -5, -3, -1, 1, 3, 5, 7]);
        for (q, &k) in ks.iter().enumerate() {
            assert_eq!(u.slot(k), Some(q));
        }
        assert_eq!(u.slot(2), None);
        assert_eq!(u.slot(9), None);
    }

    #[test]
    fn antiperiodic_and_single_mode_primitive() {
        let u = loop_with(&[
            (1, 0, Complex64::new(0.7, -0.2)),
            (-3, 1, Complex64::new(0.1, 0.4)),
        ]);
        let a = u.eval(0.13);
        let b = u.eval(0.63);
        for (x, y) in a.iter().zip(&b) {
            assert!((x + y).abs() < 1e-14);
        }
        let single = loop_with(&[(1, 0, Complex64::new(1.0, 0.0))]);
        let m = single.m_operator();
        // −(1/2π) J e^{2πJt} x
        let t = 0.2;
        let want = {
            let (s, c) = (2.0 * PI * t).sin_cos();
            let ex = [c, 0.0, s, 0.0];
            [ex[2] / (2.0 * PI), 0.0, -ex[0] / (2.0 * PI), 0.0]
        };
        for (x, y) in m.eval(t).iter().zip(&want) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn primitive_differentiates_back() {
        let u = loop_with(&[
            (5, 1, Complex64::new(0.3, 0.9)),
            (-1, 0, Complex64::new(-1.0, 0.5)),
        ]);
        let back = u.m_operator().derivative();
        for (a, b) in back.coeffs().iter().zip(u.coeffs()) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn norm_matches_quadrature() {
        let u = loop_with(&[
            (3, 0, Complex64::new(0.3, 0.9)),
            (-1, 1, Complex64::new(-1.0, 0.5)),
        ]);
        let samples = u.sample(64).unwrap();
        let quad: f64 = samples[..32]
            .iter()
            .map(|v| v.iter().map(|x| x * x).sum::<f64>())
            .sum::<f64>()
            / 64.0;
        assert!((quad - u.norm().powi(2)).abs() < 1e-13);
        let direct = u.eval(5.0 / 64.0);
        for (a, b) in direct.iter().zip(&samples[5]) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn real_round_trip() {
        let u = loop_with(&[(7, 1, Complex64::new(0.3, 0.9))]);
        let v = AntiperiodicLoop::from_real(2, 8, &u.to_real()).unwrap();
        assert_eq!(u, v);
    }
}

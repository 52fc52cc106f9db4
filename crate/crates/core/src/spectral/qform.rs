use std::f64::consts::PI;

use faer::Mat;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;

use super::orbit::{quadratic_hessian, OrbitInterpolant};
use crate::dual::{ClosedCharacteristic, ConvexBody};
use crate::error::{Error, Result};

pub const DEFAULT_ZERO_TOL: f64 = 1e-7;

/// `B(t) = H″(y(t))⁻¹` for `H = j²/2`, sampled on one half period and kept
/// as its Fourier coefficients.
#[derive(Clone, Debug)]
pub struct OrbitData {
    n: usize,
    half_period: f64,
    /// `B̂(d) = (1/N) Σ_j B(t_j) e^{2πi d j/N}`, row-major, indexed by `d mod N`.
    bhat: Vec<Vec<Complex64>>,
}

impl OrbitData {
    /// Requires a symmetric orbit, so that `B` has period `τ/2`.
    pub fn new(body: &dyn ConvexBody, ch: &ClosedCharacteristic, nodes: usize) -> Result<Self> {
        if !ch.symmetric {
            return Err(Error::Invalid(
                "the index forms need a symmetric orbit".into(),
            ));
        }
        if nodes < 8 {
            return Err(Error::Invalid(format!("too few nodes: {nodes}")));
        }
        let n = body.dim_half();
        let d = 2 * n;
        let orbit = OrbitInterpolant::from_samples(&ch.samples, ch.tau)?;
        let half = 0.5 * ch.tau;
        let mut grid = vec![vec![Complex64::new(0.0, 0.0); nodes]; d * d];
        let mut h = vec![0.0; d * d];
        for j in 0..nodes {
            let y = orbit.eval(half * j as f64 / nodes as f64);
            quadratic_hessian(body, &y, &mut h);
            let hm = DMatrix::from_row_slice(d, d, &h);
            let b = hm
                .cholesky()
                .ok_or_else(|| {
                    Error::SingularPoint("H″ is not positive definite on the orbit".into())
                })?
                .inverse();
            for r in 0..d {
                for c in 0..d {
                    grid[r * d + c][j] = Complex64::new(b[(r, c)] / nodes as f64, 0.0);
                }
            }
        }
        let fft = FftPlanner::new().plan_fft_inverse(nodes);
        for series in grid.iter_mut() {
            fft.process(series);
        }
        let bhat = (0..nodes)
            .map(|f| grid.iter().map(|s| s[f]).collect())
            .collect();
        Ok(Self {
            n,
            half_period: half,
            bhat,
        })
    }

    pub fn dim_half(&self) -> usize {
        self.n
    }

    pub fn half_period(&self) -> f64 {
        self.half_period
    }

    pub fn nodes(&self) -> usize {
        self.bhat.len()
    }

    fn coefficient(&self, d: i64) -> &[Complex64] {
        &self.bhat[d.rem_euclid(self.bhat.len() as i64) as usize]
    }
}

/// Hermitian matrix of `Q^ω` on a truncated exponential basis of the
/// `ω`-twisted loops of length `(2m−1)τ/2`.
#[derive(Clone, Debug)]
pub struct QForm {
    pub omega: Complex64,
    pub half_period: f64,
    /// Number of exponentials per coordinate.
    pub modes: usize,
    /// Row-major, size `2n·modes`.
    pub matrix: Vec<Complex64>,
    /// `max |Q − Q*|` before symmetrization.
    pub hermitian_error: f64,
}

impl QForm {
    pub fn dim(&self) -> usize {
        (self.matrix.len() as f64).sqrt().round() as usize
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let dim = self.dim();
        let m = Mat::<faer::c64>::from_fn(dim, dim, |i, j| {
            let z = self.matrix[i * dim + j];
            faer::c64::new(z.re, z.im)
        });
        let mut ev = m
            .self_adjoint_eigenvalues(faer::Side::Lower)
            .map_err(|e| Error::Assembly(format!("eigenvalue solver failed: {e:?}")))?;
        ev.sort_by(f64::total_cmp);
        Ok(ev)
    }
}

/// Argument of `ω` in `[0, 2π)`.
fn twist(omega: Complex64) -> f64 {
    let a = omega.arg();
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

/// Assemble `Q^ω` on loops of length `(2m−1)τ/2` with `K(2m−1)` exponentials
/// `e^{iλ_s t}`, `λ_s = (2πs + arg ω)/L`, `s ∈ [−K(2m−1)/2, K(2m−1)/2)`.
///
/// Rows and columns are indexed `s·2n + i`. The form is divided by `L`.
pub fn build_qform(data: &OrbitData, omega: Complex64, m: u32, modes: usize) -> Result<QForm> {
    if (omega.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!(
            "|ω| must be 1, got {}",
            omega.norm()
        )));
    }
    if m == 0 {
        return Err(Error::Domain("iteration count m must be ≥ 1".into()));
    }
    if modes < 2 || !modes.is_multiple_of(2) {
        return Err(Error::Invalid(format!(
            "modes must be even and ≥ 2, got {modes}"
        )));
    }
    let r = 2 * m as i64 - 1;
    let total = modes * r as usize;
    // |s_p − s_q| < total, and the coefficients needed are B̂((s_p − s_q)/r).
    if 2 * modes > data.nodes() {
        return Err(Error::Resolution {
            nodes: data.nodes(),
            modes,
            required: 2 * modes,
        });
    }
    let n = data.n;
    let d = 2 * n;
    let len = r as f64 * data.half_period;
    let theta = twist(omega);
    let lambda: Vec<f64> = (0..total)
        .map(|p| (2.0 * PI * (p as f64 - (total / 2) as f64) + theta) / len)
        .collect();

    // C(δ) = Jᵀ B̂(δ) J for every needed δ = (s_p − s_q)/r.
    let span = (total as i64 - 1) / r;
    let jtbj: Vec<Vec<Complex64>> = (-span..=span)
        .map(|delta| {
            let b = data.coefficient(delta);
            let mut c = vec![Complex64::new(0.0, 0.0); d * d];
            // (JᵀBJ)_{ij} = Σ J_{ki} B_{kl} J_{lj}; J e_j = ±e_{j∓n}
            let jcol = |j: usize| -> (usize, f64) {
                if j < n {
                    (j + n, 1.0)
                } else {
                    (j - n, -1.0)
                }
            };
            for i in 0..d {
                let (ki, si) = jcol(i);
                for j in 0..d {
                    let (lj, sj) = jcol(j);
                    c[i * d + j] = b[ki * d + lj] * (si * sj);
                }
            }
            c
        })
        .collect();

    let dim = total * d;
    let mut q = vec![Complex64::new(0.0, 0.0); dim * dim];
    for a in 0..total {
        for b in 0..total {
            let diff = b as i64 - a as i64;
            if diff % r != 0 {
                continue;
            }
            let c = &jtbj[(diff / r + span) as usize];
            let w = lambda[a] * lambda[b];
            for i in 0..d {
                let row = (a * d + i) * dim + b * d;
                for j in 0..d {
                    q[row + j] = c[i * d + j] * w;
                }
            }
        }
        // iλ J on the diagonal block
        let l = lambda[a];
        for i in 0..n {
            q[(a * d + i) * dim + a * d + n + i] += Complex64::new(0.0, -l);
            q[(a * d + n + i) * dim + a * d + i] += Complex64::new(0.0, l);
        }
    }
    let mut herm = 0.0f64;
    for i in 0..dim {
        for j in i..dim {
            let (x, y) = (q[i * dim + j], q[j * dim + i]);
            herm = herm.max((x - y.conj()).norm());
            let avg = 0.5 * (x + y.conj());
            q[i * dim + j] = avg;
            q[j * dim + i] = avg.conj();
        }
    }
    if herm > 1e-10 * (1.0 + lambda.iter().fold(0.0f64, |m, l| m.max(l * l))) {
        return Err(Error::Assembly(format!(
            "form is not Hermitian: defect {herm:.3e}"
        )));
    }
    Ok(QForm {
        omega,
        half_period: len,
        modes: total,
        matrix: q,
        hermitian_error: herm,
    })
}

/// Negative and zero eigenvalue counts of a form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpectralCount {
    pub index: usize,
    pub nullity: usize,
    /// Some eigenvalue lies within a decade of `zero_tol`.
    pub marginal: bool,
}

pub fn count_eigenvalues(eigs: &[f64], zero_tol: f64) -> SpectralCount {
    let index = eigs.iter().filter(|&&e| e < -zero_tol).count();
    let nullity = eigs.iter().filter(|&&e| e.abs() <= zero_tol).count();
    let marginal = eigs
        .iter()
        .any(|e| e.abs() >= 0.1 * zero_tol && e.abs() <= 10.0 * zero_tol);
    SpectralCount {
        index,
        nullity,
        marginal,
    }
}

pub fn index_nullity(form: &QForm, zero_tol: f64) -> Result<SpectralCount> {
    Ok(count_eigenvalues(&form.eigenvalues()?, zero_tol))
}

/// The `(2m−1)`-th roots of `−1`, `e^{iπ(2q+1)/(2m−1)}` for `q = 0..2m−1`.
pub fn roots_of_minus_one(m: u32) -> Vec<Complex64> {
    let r = 2 * m as i64 - 1;
    (0..r)
        .map(|q| Complex64::from_polar(1.0, PI * (2 * q + 1) as f64 / r as f64))
        .collect()
}

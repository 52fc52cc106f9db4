//! Adaptive Dormand–Prince 5(4) integration of linear matrix systems `Φ′ = A(t)Φ`.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            atol: 1e-13,
            max_steps: 2_000_000,
        }
    }
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Fundamental solution `Φ(t₁)` of `Φ′ = A(t)Φ`, `Φ(t₀) = I`, row-major `d×d`.
///
/// `coeff(t, out)` writes `A(t)` row-major into `out`.
pub fn fundamental_solution<F>(
    coeff: F,
    d: usize,
    t0: f64,
    t1: f64,
    opts: &OdeOptions,
) -> Result<(Vec<f64>, usize)>
where
    F: Fn(f64, &mut [f64]) -> Result<()>,
{
    let size = d * d;
    let mut y = vec![0.0; size];
    for i in 0..d {
        y[i * d + i] = 1.0;
    }
    let mut amat = vec![0.0; size];
    let rhs = |t: f64, y: &[f64], out: &mut [f64], amat: &mut [f64]| -> Result<()> {
        coeff(t, amat)?;
        for i in 0..d {
            for j in 0..d {
                out[i * d + j] = (0..d).map(|k| amat[i * d + k] * y[k * d + j]).sum();
            }
        }
        Ok(())
    };
    let mut k = vec![vec![0.0; size]; 7];
    let mut tmp = vec![0.0; size];
    let mut ynew = vec![0.0; size];
    let span = t1 - t0;
    let mut t = t0;
    let mut h = span * 1e-3;
    rhs(t, &y, &mut k[0], &mut amat)?;
    let mut steps = 0;
    while t < t1 {
        if steps >= opts.max_steps {
            return Err(Error::IntegrationAccuracy(format!(
                "step budget {} exhausted at t = {t}",
                opts.max_steps
            )));
        }
        if t + h > t1 {
            h = t1 - t;
        }
        for s in 1..7 {
            for e in 0..size {
                tmp[e] = y[e] + h * (0..s).map(|r| A[s][r] * k[r][e]).sum::<f64>();
            }
            rhs(t + C[s] * h, &tmp, &mut k[s], &mut amat)?;
        }
        // The seventh stage is evaluated at the fifth-order solution.
        ynew.copy_from_slice(&tmp);
        let mut err = 0.0;
        for e in 0..size {
            let diff: f64 = h
                * (0..7)
                    .map(|r| (A[6].get(r).copied().unwrap_or(0.0) - B4[r]) * k[r][e])
                    .sum::<f64>();
            let sc = opts.atol + opts.rtol * y[e].abs().max(ynew[e].abs());
            err += (diff / sc).powi(2);
        }
        let err = (err / size as f64).sqrt();
        if err <= 1.0 {
            t += h;
            y.copy_from_slice(&ynew);
            k.swap(0, 6);
            steps += 1;
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
        if h < 1e-14 * span.abs() {
            return Err(Error::IntegrationAccuracy(format!(
                "step size underflow at t = {t}"
            )));
        }
    }
    Ok((y, steps))
}

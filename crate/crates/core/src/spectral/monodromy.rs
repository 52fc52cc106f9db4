use nalgebra::DMatrix;

use super::ode::{fundamental_solution, OdeOptions};
use super::orbit::{j_times, quadratic_hessian, OrbitInterpolant};
use crate::dual::{h_hess, ClosedCharacteristic, ConvexBody, DualParams};
use crate::error::{Error, Result};
use crate::symplectic::SymplecticMatrix;

#[derive(Clone, Copy, Debug)]
pub struct MonodromyOptions {
    pub ode: OdeOptions,
    /// Largest accepted `‖RᵀJR − J‖_max` for either fundamental solution.
    pub drift_tol: f64,
}

impl Default for MonodromyOptions {
    fn default() -> Self {
        Self {
            ode: OdeOptions::default(),
            drift_tol: 1e-6,
        }
    }
}

/// Linearized flows over half a period.
#[derive(Clone, Debug)]
pub struct MonodromyResult {
    /// `R(1/2)` for `ξ̇ = J H_a″(x(t)) ξ`, `x(t) = ρ y(τt)`.
    pub r_half: SymplecticMatrix,
    /// Half-period map of the linearized flow of `j²/2` along `y`.
    pub r_quad: SymplecticMatrix,
    pub gamma: f64,
    /// Columns `−ẋ(0), x(0), e₁, …, e_{2n−2}`; the `e_k` span the symplectic
    /// complement of the first two.
    pub basis: Vec<Vec<f64>>,
    /// Upper-left `2×2` block of `R(1/2)` in the adapted frame.
    pub frame_block: [[f64; 2]; 2],
    /// `‖R(1/2)ẋ(0) + ẋ(0)‖_∞ / ‖ẋ(0)‖_∞`.
    pub tangent_residual: f64,
    pub drift: f64,
    pub steps: usize,
}

fn omega(u: &[f64], v: &[f64]) -> f64 {
    // uᵀJv with J = [[0, −I], [I, 0]]
    let n = u.len() / 2;
    (0..n).map(|i| -u[i] * v[n + i] + u[n + i] * v[i]).sum()
}

fn adapted_frame(xdot: &[f64], x: &[f64]) -> Result<Vec<Vec<f64>>> {
    let d = x.len();
    let v1: Vec<f64> = xdot.iter().map(|c| -c).collect();
    let v2 = x.to_vec();
    let w12 = omega(&v1, &v2);
    if w12.abs() < 1e-12 {
        return Err(Error::Recovery(
            "ẋ(0) and x(0) span an isotropic plane".into(),
        ));
    }
    let mut basis = vec![v1.clone(), v2.clone()];
    // Orthonormal copy of the accepted vectors, for the independence test only.
    let mut ortho: Vec<Vec<f64>> = Vec::new();
    let push_ortho = |v: &[f64], ortho: &mut Vec<Vec<f64>>| -> f64 {
        let mut r = v.to_vec();
        for q in ortho.iter() {
            let s: f64 = r.iter().zip(q).map(|(a, b)| a * b).sum();
            r.iter_mut().zip(q).for_each(|(a, b)| *a -= s * b);
        }
        let norm = r.iter().map(|a| a * a).sum::<f64>().sqrt();
        let scale = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-3 * scale.max(1e-300) {
            ortho.push(r.iter().map(|a| a / norm).collect());
        }
        norm / scale.max(1e-300)
    };
    push_ortho(&v1, &mut ortho);
    push_ortho(&v2, &mut ortho);
    for k in 0..d {
        if basis.len() == d {
            break;
        }
        let mut w = vec![0.0; d];
        w[k] = 1.0;
        let a = omega(&w, &v2) / w12;
        let b = omega(&w, &v1) / w12;
        for c in 0..d {
            w[c] += -a * v1[c] + b * v2[c];
        }
        let before = ortho.len();
        push_ortho(&w, &mut ortho);
        if ortho.len() > before {
            basis.push(w);
        }
    }
    if basis.len() != d {
        return Err(Error::Recovery(
            "could not complete the adapted frame".into(),
        ));
    }
    Ok(basis)
}

fn flow<F>(coeff: F, d: usize, t1: f64, opts: &OdeOptions) -> Result<(DMatrix<f64>, usize)>
where
    F: Fn(f64, &mut [f64]) -> Result<()>,
{
    let (phi, steps) = fundamental_solution(coeff, d, 0.0, t1, opts)?;
    Ok((DMatrix::from_row_slice(d, d, &phi), steps))
}

/// Integrate both half-period linearized flows along `ch` and read off the shear.
pub fn monodromy(
    body: &dyn ConvexBody,
    params: &DualParams,
    ch: &ClosedCharacteristic,
    opts: &MonodromyOptions,
) -> Result<MonodromyResult> {
    let n = body.dim_half();
    let d = 2 * n;
    let orbit = OrbitInterpolant::from_samples(&ch.samples, ch.tau)?;
    let (rho, tau) = (ch.rho, ch.tau);

    let (r_half, steps_a) = flow(
        |t, a| {
            let y = orbit.eval(tau * t);
            let x: Vec<f64> = y.iter().map(|c| rho * c).collect();
            let mut h = vec![0.0; d * d];
            h_hess(body, params, &x, &mut h)?;
            j_times(&h, a, n);
            Ok(())
        },
        d,
        0.5,
        &opts.ode,
    )?;
    let (r_quad, steps_q) = flow(
        |s, a| {
            let y = orbit.eval(s);
            let mut h = vec![0.0; d * d];
            quadratic_hessian(body, &y, &mut h);
            j_times(&h, a, n);
            Ok(())
        },
        d,
        0.5 * tau,
        &opts.ode,
    )?;

    let to_sp = |m: DMatrix<f64>| -> Result<(SymplecticMatrix, f64)> {
        let sp = SymplecticMatrix::from_trusted(m);
        let defect = sp.defect();
        Ok((sp, defect))
    };
    let (r_half, da) = to_sp(r_half)?;
    let (r_quad, dq) = to_sp(r_quad)?;
    let drift = da.max(dq);
    if !(drift <= opts.drift_tol) {
        return Err(Error::IntegrationAccuracy(format!(
            "symplectic drift {drift:.3e} exceeds {:.1e}",
            opts.drift_tol
        )));
    }

    let x0: Vec<f64> = orbit.eval(0.0).iter().map(|c| rho * c).collect();
    let xdot0: Vec<f64> = orbit
        .eval_derivative(0.0, 1)
        .iter()
        .map(|c| rho * tau * c)
        .collect();
    let r = r_half.matrix();
    let rx = r * nalgebra::DVector::from_column_slice(&xdot0);
    let scale = xdot0.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let tangent_residual = rx
        .iter()
        .zip(&xdot0)
        .fold(0.0f64, |m, (a, b)| m.max((a + b).abs()))
        / scale;

    let basis = adapted_frame(&xdot0, &x0)?;
    let f = DMatrix::from_fn(d, d, |i, j| basis[j][i]);
    let lu = f.clone().lu();
    let b = lu
        .solve(&(r * &f))
        .ok_or_else(|| Error::Recovery("adapted frame is singular".into()))?;
    let frame_block = [[b[(0, 0)], b[(0, 1)]], [b[(1, 0)], b[(1, 1)]]];
    Ok(MonodromyResult {
        r_half,
        r_quad,
        gamma: -frame_block[0][1],
        basis,
        frame_block,
        tangent_residual,
        drift,
        steps: steps_a + steps_q,
    })
}

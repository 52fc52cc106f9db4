use num_complex::Complex64;
use serde::Serialize;

use super::qform::{build_qform, index_nullity, roots_of_minus_one, OrbitData, SpectralCount};
use crate::error::Result;
use crate::exec::Execution;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct OmegaCount {
    /// `arg ω / π`.
    pub angle_over_pi: f64,
    pub index: usize,
    pub nullity: usize,
    pub marginal: bool,
}

/// Direct form at `ω = −1` on `(2m−1)τ/2` against the sum over the
/// `(2m−1)`-th roots of `−1` on `τ/2`.
#[derive(Clone, Debug, Serialize)]
pub struct BottReport {
    pub m: u32,
    pub modes: usize,
    pub direct_index: usize,
    pub direct_nullity: usize,
    pub bott_sum: usize,
    pub bott_nullity: usize,
    pub per_omega: Vec<OmegaCount>,
    pub marginal: bool,
    pub pass: bool,
}

pub fn bott_check(
    data: &OrbitData,
    m: u32,
    modes: usize,
    zero_tol: f64,
    exec: Execution,
) -> Result<BottReport> {
    let roots = roots_of_minus_one(m);
    // Job 0 is the direct form; the rest are the single-period twisted forms.
    let jobs = roots.len() + 1;
    let counts: Vec<Result<SpectralCount>> = exec.map_range(jobs, |k| {
        let form = if k == 0 {
            build_qform(data, Complex64::new(-1.0, 0.0), m, modes)?
        } else {
            build_qform(data, roots[k - 1], 1, modes)?
        };
        index_nullity(&form, zero_tol)
    });
    let counts = counts.into_iter().collect::<Result<Vec<_>>>()?;
    let direct = counts[0];
    let per_omega: Vec<OmegaCount> = roots
        .iter()
        .zip(&counts[1..])
        .map(|(w, c)| OmegaCount {
            angle_over_pi: w.arg() / std::f64::consts::PI,
            index: c.index,
            nullity: c.nullity,
            marginal: c.marginal,
        })
        .collect();
    let bott_sum = per_omega.iter().map(|c| c.index).sum();
    let bott_nullity = per_omega.iter().map(|c| c.nullity).sum();
    let marginal = counts.iter().any(|c| c.marginal);
    Ok(BottReport {
        m,
        modes,
        direct_index: direct.index,
        direct_nullity: direct.nullity,
        bott_sum,
        bott_nullity,
        per_omega,
        marginal,
        pass: direct.index == bott_sum && direct.nullity == bott_nullity,
    })
}

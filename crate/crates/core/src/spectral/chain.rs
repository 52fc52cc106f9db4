use num_complex::Complex64;
use serde::Serialize;

use super::monodromy::{monodromy, MonodromyOptions, MonodromyResult};
use super::qform::{
    build_qform, index_nullity, roots_of_minus_one, OrbitData, SpectralCount, DEFAULT_ZERO_TOL,
};
use crate::dual::{ClosedCharacteristic, ConvexBody, DualParams};
use crate::error::Result;
use crate::exec::Execution;
use crate::index::{iterate, Decomposition, IterationIndex};
use crate::symplectic::{classify_with, ClassifyOptions, NormalFormBlock};

#[derive(Clone, Copy, Debug)]
pub struct ChainOptions {
    pub modes: usize,
    pub zero_tol: f64,
    pub classify: ClassifyOptions,
    pub monodromy: MonodromyOptions,
    pub exec: Execution,
}

impl Default for ChainOptions {
    fn default() -> Self {
        Self {
            modes: 64,
            zero_tol: DEFAULT_ZERO_TOL,
            classify: ClassifyOptions::default(),
            monodromy: MonodromyOptions::default(),
            exec: Execution::default(),
        }
    }
}

/// Quadrature nodes on `τ/2` for a given truncation.
pub fn nodes_for(modes: usize) -> usize {
    (8 * modes).max(256)
}

/// Everything the index chain derives from one orbit.
#[derive(Clone, Debug)]
pub struct OrbitAnalysis {
    pub monodromy: MonodromyResult,
    pub blocks: Vec<NormalFormBlock>,
    /// Index of `Q¹` on `τ/2`, constant loops included as null directions.
    pub q1_index: usize,
    pub decomposition: Decomposition,
    pub data: OrbitData,
}

/// Monodromy, its normal form, and `i₁ = ind Q¹ + n`.
pub fn analyze_orbit(
    body: &dyn ConvexBody,
    params: &DualParams,
    ch: &ClosedCharacteristic,
    opts: &ChainOptions,
) -> Result<OrbitAnalysis> {
    let mono = monodromy(body, params, ch, &opts.monodromy)?;
    let blocks = classify_with(&mono.r_quad, opts.classify)?;
    let data = OrbitData::new(body, ch, nodes_for(2 * opts.modes))?;
    let q1 = build_qform(&data, Complex64::new(1.0, 0.0), 1, opts.modes)?;
    let q1_index = index_nullity(&q1, opts.zero_tol)?.index;
    let decomposition =
        Decomposition::with_total_i1(&blocks, q1_index as i64 + body.dim_half() as i64)?;
    Ok(OrbitAnalysis {
        monodromy: mono,
        blocks,
        q1_index,
        decomposition,
        data,
    })
}

/// One row of the analytic-vs-spectral comparison.
#[derive(Clone, Debug, Serialize)]
pub struct CrossRow {
    pub m: u32,
    pub analytic: IterationIndex,
    pub direct_index: usize,
    pub direct_nullity: usize,
    /// Sums over the `(2m−1)`-th roots of `−1` of the single-period counts.
    pub bott_sum: usize,
    pub bott_nullity: usize,
    /// Direct counts with the truncation doubled.
    pub doubled_index: usize,
    pub doubled_nullity: usize,
    pub k_stable: bool,
    pub bott_pass: bool,
    /// Analytic and spectral counts agree and are stable in `K`.
    pub pass: bool,
}

/// Direct form at `K` and `2K`, and the Bott blocks at `K`, for iterate `m`.
pub fn cross_validate(analysis: &OrbitAnalysis, m: u32, opts: &ChainOptions) -> Result<CrossRow> {
    let analytic = iterate(&analysis.decomposition, m)?;
    let minus = Complex64::new(-1.0, 0.0);
    let roots = roots_of_minus_one(m);
    // Jobs: direct at K, direct at 2K, then one per root.
    let counts: Vec<Result<SpectralCount>> = opts.exec.map_range(roots.len() + 2, |k| {
        let form = match k {
            0 => build_qform(&analysis.data, minus, m, opts.modes)?,
            1 => build_qform(&analysis.data, minus, m, 2 * opts.modes)?,
            _ => build_qform(&analysis.data, roots[k - 2], 1, opts.modes)?,
        };
        index_nullity(&form, opts.zero_tol)
    });
    let counts = counts.into_iter().collect::<Result<Vec<_>>>()?;
    let (base, doubled) = (counts[0], counts[1]);
    let bott_sum = counts[2..].iter().map(|c| c.index).sum();
    let bott_nullity = counts[2..].iter().map(|c| c.nullity).sum();
    let k_stable = base.index == doubled.index
        && base.nullity == doubled.nullity
        && counts.iter().all(|c| !c.marginal);
    let bott_pass = base.index == bott_sum && base.nullity == bott_nullity;
    let pass = k_stable
        && base.index as i64 == analytic.i_minus1
        && base.nullity as i64 == analytic.nu_minus1 as i64;
    Ok(CrossRow {
        m,
        analytic,
        direct_index: base.index,
        direct_nullity: base.nullity,
        bott_sum,
        bott_nullity,
        doubled_index: doubled.index,
        doubled_nullity: doubled.nullity,
        k_stable,
        bott_pass,
        pass,
    })
}

/// Fill in the monodromy, index and nullity of a recovered characteristic.
pub fn annotate(ch: &mut ClosedCharacteristic, analysis: &OrbitAnalysis) -> Result<()> {
    let first = iterate(&analysis.decomposition, 1)?;
    ch.monodromy = Some(analysis.monodromy.r_half.clone());
    ch.index = Some(first.orbit_index());
    ch.nullity = Some(first.orbit_nullity());
    Ok(())
}

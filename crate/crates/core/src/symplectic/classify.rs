use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::angle::Angle;
use super::matrix::{eigenvalues, SymplecticMatrix};
use super::normal_form::NormalFormBlock;
use crate::error::{Error, Result};

pub const DEFAULT_CLUSTER_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug)]
pub struct ClassifyOptions {
    /// Eigenvalues closer than this are merged; clusters this close to the unit
    /// circle are treated as lying on it.
    pub cluster_tol: f64,
    /// Relative threshold for ranks and form signatures.
    pub rank_tol: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            cluster_tol: DEFAULT_CLUSTER_TOL,
            rank_tol: 1e-6,
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Cluster {
    pub centre: Complex64,
    pub members: Vec<Complex64>,
}

/// Single-linkage clustering at distance `tol`.
pub(crate) fn cluster(eigs: &[Complex64], tol: f64) -> Vec<Cluster> {
    let n = eigs.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(l: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while l[r] != r {
            r = l[r];
        }
        l[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (eigs[i] - eigs[j]).norm() <= tol {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                if a != b {
                    label[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut out: Vec<(usize, Cluster)> = Vec::new();
    for i in 0..n {
        let root = find(&mut label, i);
        match out.iter_mut().find(|(r, _)| *r == root) {
            Some((_, c)) => c.members.push(eigs[i]),
            None => out.push((
                root,
                Cluster {
                    centre: Complex64::new(0.0, 0.0),
                    members: vec![eigs[i]],
                },
            )),
        }
    }
    out.into_iter()
        .map(|(_, mut c)| {
            c.centre = c.members.iter().sum::<Complex64>() / c.members.len() as f64;
            c
        })
        .collect()
}

/// Normal-form blocks whose ⋄-product shares the unit-circle spectrum,
/// the kernel dimensions on it and the splitting behaviour of `m`.
pub fn classify(m: &SymplecticMatrix, cluster_tol: f64) -> Result<Vec<NormalFormBlock>> {
    classify_with(
        m,
        ClassifyOptions {
            cluster_tol,
            ..ClassifyOptions::default()
        },
    )
}

fn ambiguous(detail: impl Into<String>, clusters: &[Cluster]) -> Error {
    Error::ClassificationAmbiguous {
        detail: detail.into(),
        clusters: clusters.iter().map(|c| c.centre).collect(),
    }
}

pub fn classify_with(m: &SymplecticMatrix, opts: ClassifyOptions) -> Result<Vec<NormalFormBlock>> {
    let tol = opts.cluster_tol;
    let a = m.matrix();
    let n = m.dim_half();
    let clusters = cluster(&eigenvalues(a), tol);

    for (i, c) in clusters.iter().enumerate() {
        let off = (c.centre.norm() - 1.0).abs();
        if off > tol && off <= 10.0 * tol {
            return Err(ambiguous(
                "eigenvalue cluster too close to the unit circle",
                &clusters,
            ));
        }
        if off <= tol && c.centre.im.abs() > tol && c.centre.im.abs() <= 10.0 * tol {
            return Err(ambiguous("unit eigenvalue too close to ±1", &clusters));
        }
        for d in &clusters[i + 1..] {
            if (c.centre - d.centre).norm() <= 10.0 * tol {
                return Err(ambiguous(
                    "eigenvalue clusters too close to separate",
                    &clusters,
                ));
            }
        }
    }

    let scale = a.norm().max(1.0);
    let mut minus_id = 0;
    let mut minus_jordan = Vec::new();
    let mut plus = Vec::new();
    let mut rotations = Vec::new();
    let mut rot4 = Vec::new();
    let mut dilations = Vec::new();

    for c in &clusters {
        let d = c.members.len();
        let on_circle = (c.centre.norm() - 1.0).abs() <= tol;
        let real = c.centre.im.abs() <= tol;
        if !on_circle {
            if c.centre.norm() < 1.0 {
                continue;
            }
            if real {
                let s = c.centre.re.signum();
                dilations.extend((0..d).map(|_| NormalFormBlock::Dilation { lambda: 2.0 * s }));
            } else if c.centre.im > 0.0 {
                dilations.extend((0..2 * d).map(|_| NormalFormBlock::Dilation { lambda: 2.0 }));
            }
            continue;
        }
        if !real && c.centre.im < 0.0 {
            continue;
        }
        let lambda = if real {
            Complex64::new(c.centre.re.signum(), 0.0)
        } else {
            c.centre / c.centre.norm()
        };
        let local = LocalStructure::compute(a, lambda, d, scale, &opts).map_err(|e| match e {
            Error::ClassificationAmbiguous { detail, .. } => ambiguous(detail, &clusters),
            other => other,
        })?;
        if real {
            let semisimple = d - 2 * local.jordan_signs.len();
            if semisimple % 2 != 0 {
                return Err(Error::UnsupportedForm(format!(
                    "odd semisimple part at eigenvalue {}",
                    lambda.re
                )));
            }
            let l = lambda.re as i8;
            let blocks = local
                .jordan_signs
                .iter()
                .map(|&s| NormalFormBlock::Jordan2 {
                    lambda: l,
                    b: -l * s,
                });
            if l < 0 {
                minus_id += semisimple / 2;
                minus_jordan.extend(blocks);
            } else {
                plus.extend((0..semisimple / 2).map(|_| NormalFormBlock::identity2()));
                plus.extend(blocks);
            }
        } else {
            let phi = lambda.arg();
            let base = Angle::radians(phi);
            rotations
                .extend((0..local.krein_pos).map(|_| NormalFormBlock::Rotation2 { theta: base }));
            rotations.extend((0..local.krein_neg).map(|_| NormalFormBlock::Rotation2 {
                theta: Angle::radians(2.0 * PI - phi),
            }));
            for &s in &local.jordan_signs {
                rot4.push(NormalFormBlock::rotation4_with_sign(base, s)?);
            }
        }
    }

    let mut out = Vec::new();
    out.extend((0..minus_id).map(|_| NormalFormBlock::minus_identity2()));
    out.extend(minus_jordan);
    out.extend(plus);
    out.extend(rotations);
    out.extend(rot4);
    out.extend(dilations);
    let total: usize = out.iter().map(|b| b.dim_half()).sum();
    if total != n {
        return Err(Error::UnsupportedForm(format!(
            "recovered blocks span {} of {} dimensions",
            2 * total,
            2 * n
        )));
    }
    Ok(out)
}

/// Structure of the generalized eigenspace at a unit eigenvalue `λ` (Im λ ≥ 0).
struct LocalStructure {
    /// One sign per 2-chain: the sign of `λ·⟨(M−λ)x, Jx⟩` on its top vector.
    jordan_signs: Vec<i8>,
    krein_pos: usize,
    krein_neg: usize,
}

fn hermitian_eigs(h: &DMatrix<Complex64>) -> Vec<f64> {
    let sym = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
    sym.symmetric_eigenvalues().iter().copied().collect()
}

impl LocalStructure {
    fn compute(
        a: &DMatrix<f64>,
        lambda: Complex64,
        d: usize,
        scale: f64,
        opts: &ClassifyOptions,
    ) -> Result<Self> {
        let dim = a.nrows();
        let shifted = DMatrix::from_fn(dim, dim, |i, j| {
            let v = Complex64::new(a[(i, j)], 0.0);
            if i == j {
                v - lambda
            } else {
                v
            }
        });
        let mut power = shifted.clone();
        for _ in 1..d {
            power = &power * &shifted;
        }
        let v = smallest_right_singular(&power, d);
        let ne = v.adjoint() * &shifted * &v;
        let nsq = (&ne * &ne).norm();
        if nsq > 1e-6 * scale * scale {
            return Err(Error::UnsupportedForm(format!(
                "Jordan chain longer than 2 at eigenvalue {lambda}"
            )));
        }
        let svd = ne.clone().svd(false, true);
        let vt = svd.v_t.expect("requested v_t");
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
        let thresh = opts.rank_tol * scale;
        let r = order
            .iter()
            .filter(|&&i| svd.singular_values[i] > thresh)
            .count();
        if order.iter().any(|&i| {
            svd.singular_values[i] > thresh * 1e-2 && svd.singular_values[i] <= thresh * 1e2
        }) {
            return Err(Error::ClassificationAmbiguous {
                detail: format!("Jordan rank at {lambda} is not well separated"),
                clusters: vec![],
            });
        }
        let j = super::matrix::standard_j(dim / 2).map(|x| Complex64::new(x, 0.0));
        let col = |k: usize| -> nalgebra::DVector<Complex64> {
            let coeffs = vt.row(order[k]).adjoint();
            &v * coeffs
        };

        let mut jordan_signs = Vec::new();
        if r > 0 {
            let tops: Vec<_> = (0..r).map(col).collect();
            let images: Vec<_> = tops.iter().map(|x| &shifted * x).collect();
            let k = DMatrix::from_fn(r, r, |p, q| {
                lambda * (images[p].adjoint() * &j * &tops[q])[(0, 0)]
            });
            for e in hermitian_eigs(&k) {
                if e.abs() <= thresh {
                    return Err(Error::ClassificationAmbiguous {
                        detail: format!("degenerate Jordan form at {lambda}"),
                        clusters: vec![],
                    });
                }
                jordan_signs.push(if e > 0.0 { 1 } else { -1 });
            }
        }

        let (mut krein_pos, mut krein_neg) = (0, 0);
        if lambda.im != 0.0 && d > 2 * r {
            let kernel: Vec<_> = (r..d).map(col).collect();
            let kd = kernel.len();
            let g = DMatrix::from_fn(kd, kd, |p, q| {
                Complex64::new(0.0, -1.0) * (kernel[p].adjoint() * &j * &kernel[q])[(0, 0)]
            });
            let mut zeros = 0;
            for e in hermitian_eigs(&g) {
                if e.abs() <= thresh {
                    zeros += 1;
                } else if e > 0.0 {
                    krein_pos += 1;
                } else {
                    krein_neg += 1;
                }
            }
            if zeros != r {
                return Err(Error::ClassificationAmbiguous {
                    detail: format!("Krein form at {lambda} has unexpected radical"),
                    clusters: vec![],
                });
            }
        }
        Ok(Self {
            jordan_signs,
            krein_pos,
            krein_neg,
        })
    }
}

/// Orthonormal columns spanning the `k` smallest right singular directions.
fn smallest_right_singular(m: &DMatrix<Complex64>, k: usize) -> DMatrix<Complex64> {
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("requested v_t");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    let cols: Vec<_> = order[..k].iter().map(|&i| vt.row(i).adjoint()).collect();
    DMatrix::from_columns(&cols)
}

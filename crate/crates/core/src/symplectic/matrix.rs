use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const DEFAULT_SYMPLECTIC_TOL: f64 = 1e-9;
/// Relative singular-value threshold used for kernel dimensions.
pub const DEFAULT_RANK_TOL: f64 = 1e-7;

/// `J = [[0, -I], [I, 0]]` of size `2n`.
pub fn standard_j(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = -1.0;
        j[(n + i, i)] = 1.0;
    }
    j
}

fn half_dim(rows: usize, cols: usize) -> Result<usize> {
    if rows != cols {
        return Err(Error::Dimension(format!(
            "matrix is {rows}x{cols}, expected square"
        )));
    }
    if rows == 0 || !rows.is_multiple_of(2) {
        return Err(Error::Dimension(format!(
            "dimension {rows} is not a positive even number"
        )));
    }
    Ok(rows / 2)
}

fn symplectic_defect(m: &DMatrix<f64>, n: usize) -> f64 {
    let j = standard_j(n);
    (m.transpose() * &j * m - j).amax()
}

/// True iff `max |MᵀJM − J| ≤ tol`.
pub fn is_symplectic(m: &DMatrix<f64>, tol: f64) -> Result<bool> {
    let n = half_dim(m.nrows(), m.ncols())?;
    Ok(symplectic_defect(m, n) <= tol)
}

/// A real `2n×2n` matrix with `MᵀJM = J` up to the tolerance it was checked at.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticMatrix {
    n: usize,
    m: DMatrix<f64>,
}

impl SymplecticMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        Self::with_tol(m, DEFAULT_SYMPLECTIC_TOL)
    }

    pub fn with_tol(m: DMatrix<f64>, tol: f64) -> Result<Self> {
        let n = half_dim(m.nrows(), m.ncols())?;
        let defect = symplectic_defect(&m, n);
        if !(defect <= tol) {
            return Err(Error::ContractViolation(format!(
                "matrix is not symplectic: |MᵀJM − J| = {defect:.3e} > {tol:.1e}"
            )));
        }
        if m.determinant() <= 0.0 {
            return Err(Error::ContractViolation(
                "symplectic matrix with det ≤ 0".into(),
            ));
        }
        Ok(Self { n, m })
    }

    pub(crate) fn from_trusted(m: DMatrix<f64>) -> Self {
        let n = m.nrows() / 2;
        Self { n, m }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_trusted(DMatrix::identity(2 * n, 2 * n))
    }

    pub fn dim_half(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }

    pub fn defect(&self) -> f64 {
        symplectic_defect(&self.m, self.n)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.m.nrows())
            .map(|i| self.m.row(i).iter().copied().collect())
            .collect()
    }

    pub fn from_rows(rows: &[Vec<f64>], tol: f64) -> Result<Self> {
        let r = rows.len();
        if rows.iter().any(|row| row.len() != r) {
            return Err(Error::Dimension(
                "matrix rows must all have length equal to the row count".into(),
            ));
        }
        let m = DMatrix::from_fn(r, r, |i, j| rows[i][j]);
        Self::with_tol(m, tol)
    }
}

/// The ⋄-product: `(A1 B1; C1 D1) ⋄ (A2 B2; C2 D2)` interleaved so that the
/// position block comes first and the momentum block second.
pub fn diamond(m1: &SymplecticMatrix, m2: &SymplecticMatrix) -> Result<SymplecticMatrix> {
    for (k, m) in [m1, m2].into_iter().enumerate() {
        let d = m.defect();
        if !(d <= 1e-6) {
            return Err(Error::ContractViolation(format!(
                "diamond operand {} not symplectic (defect {d:.3e})",
                k + 1
            )));
        }
    }
    Ok(SymplecticMatrix::from_trusted(diamond_raw(&m1.m, &m2.m)))
}

pub(crate) fn diamond_raw(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (p, q) = (a.nrows() / 2, b.nrows() / 2);
    let n = p + q;
    let mut out = DMatrix::zeros(2 * n, 2 * n);
    // row/col of operand -> row/col of result
    let map_a = |i: usize| if i < p { i } else { n + (i - p) };
    let map_b = |i: usize| if i < q { p + i } else { n + p + (i - q) };
    for i in 0..2 * p {
        for j in 0..2 * p {
            out[(map_a(i), map_a(j))] = a[(i, j)];
        }
    }
    for i in 0..2 * q {
        for j in 0..2 * q {
            out[(map_b(i), map_b(j))] = b[(i, j)];
        }
    }
    out
}

fn complex_shifted(m: &DMatrix<f64>, w: Complex64) -> DMatrix<Complex64> {
    let d = m.nrows();
    DMatrix::from_fn(d, d, |i, j| {
        let v = Complex64::new(m[(i, j)], 0.0);
        if i == j {
            v - w
        } else {
            v
        }
    })
}

/// `dim_C ker(M − ωI)` for `|ω| = 1`.
pub fn nullity_omega(m: &SymplecticMatrix, w: Complex64) -> Result<usize> {
    nullity_omega_with(m, w, DEFAULT_RANK_TOL)
}

pub fn nullity_omega_with(m: &SymplecticMatrix, w: Complex64, rank_tol: f64) -> Result<usize> {
    if (w.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!("|ω| = {} is not 1", w.norm())));
    }
    let shifted = complex_shifted(&m.m, w);
    let sv = shifted.singular_values();
    let scale = m.m.norm().max(1.0);
    Ok(sv.iter().filter(|&&s| s <= rank_tol * scale).count())
}

/// Total algebraic multiplicity of eigenvalues on the unit circle.
pub fn elliptic_height(m: &SymplecticMatrix) -> usize {
    elliptic_height_with(m, super::DEFAULT_CLUSTER_TOL)
}

pub fn elliptic_height_with(m: &SymplecticMatrix, cluster_tol: f64) -> usize {
    let eigs = eigenvalues(&m.m);
    super::classify::cluster(&eigs, cluster_tol)
        .iter()
        .filter(|c| (c.centre.norm() - 1.0).abs() <= cluster_tol)
        .map(|c| c.members.len())
        .sum()
}

pub(crate) fn eigenvalues(m: &DMatrix<f64>) -> Vec<Complex64> {
    let ev: DVector<Complex64> = m.clone().complex_eigenvalues();
    ev.iter().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rot(t: f64) -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()])
    }

    #[test]
    fn identity_and_rotation_are_symplectic() {
        assert!(is_symplectic(&DMatrix::identity(4, 4), 1e-9).unwrap());
        assert!(is_symplectic(&rot(0.7), 1e-9).unwrap());
        let mut shear = DMatrix::identity(2, 2);
        shear[(0, 1)] = 1e-3;
        assert!(is_symplectic(&shear, 1e-9).unwrap());
    }

    #[test]
    fn odd_dimension_rejected() {
        assert!(matches!(
            is_symplectic(&DMatrix::identity(3, 3), 1e-9),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn non_symplectic_detected() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 2.0]);
        assert!(!is_symplectic(&m, 1e-9).unwrap());
        assert!(SymplecticMatrix::new(m).is_err());
    }

    #[test]
    fn diamond_of_dilations() {
        let d = SymplecticMatrix::new(DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 0.5])))
            .unwrap();
        let dd = diamond(&d, &d).unwrap();
        let want = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 2.0, 0.5, 0.5]));
        assert_eq!(dd.matrix(), &want);
        let i2 = SymplecticMatrix::identity(1);
        assert_eq!(diamond(&i2, &i2).unwrap(), SymplecticMatrix::identity(2));
    }

    #[test]
    fn diamond_layout() {
        let a = SymplecticMatrix::new(rot(std::f64::consts::FRAC_PI_3)).unwrap();
        let b =
            SymplecticMatrix::new(DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0])).unwrap();
        let d = diamond(&a, &b).unwrap();
        let m = d.matrix();
        assert_eq!(m[(0, 0)], a.matrix()[(0, 0)]);
        assert_eq!(m[(0, 2)], a.matrix()[(0, 1)]);
        assert_eq!(m[(2, 0)], a.matrix()[(1, 0)]);
        assert_eq!(m[(1, 3)], 1.0);
        assert_eq!(m[(0, 1)], 0.0);
        assert!(d.defect() <= 1e-12);
    }

    #[test]
    fn nullities() {
        let i2 = SymplecticMatrix::identity(1);
        assert_eq!(nullity_omega(&i2, Complex64::new(1.0, 0.0)).unwrap(), 2);
        let m = SymplecticMatrix::new(-DMatrix::<f64>::identity(2, 2)).unwrap();
        assert_eq!(nullity_omega(&m, Complex64::new(-1.0, 0.0)).unwrap(), 2);
        let r = SymplecticMatrix::new(rot(std::f64::consts::FRAC_PI_2)).unwrap();
        assert_eq!(nullity_omega(&r, Complex64::new(0.0, 1.0)).unwrap(), 1);
        assert!(matches!(
            nullity_omega(&r, Complex64::new(2.0, 0.0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn heights() {
        assert_eq!(elliptic_height(&SymplecticMatrix::identity(1)), 2);
        let d = SymplecticMatrix::new(DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 0.5])))
            .unwrap();
        assert_eq!(elliptic_height(&d), 0);
        let r = SymplecticMatrix::new(rot(std::f64::consts::FRAC_PI_3)).unwrap();
        assert_eq!(elliptic_height(&diamond(&r, &d).unwrap()), 2);
    }
}

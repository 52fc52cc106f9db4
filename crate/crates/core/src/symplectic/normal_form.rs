use nalgebra::DMatrix;

use super::angle::Angle;
use super::matrix::SymplecticMatrix;
use crate::error::{Error, Result};

/// Basic symplectic normal forms.
///
/// * `Dilation`: `D(λ) = diag(λ, 1/λ)`, `λ = ±2`.
/// * `Jordan2`: `N₁(λ, b) = [[λ, b], [0, λ]]`, `λ = ±1`, `b ∈ {1, 0, −1}`.
/// * `Rotation2`: `R(θ)`.
/// * `Rotation4`: `N₂ = [[R(θ), b], [0, R(θ)]]` with `b₂ ≠ b₃`.
///
/// `N₂` is symplectic only when `R(θ)ᵀb` is symmetric; constructors reject other `b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormalFormBlock {
    Dilation {
        lambda: f64,
    },
    Jordan2 {
        lambda: i8,
        b: i8,
    },
    Rotation2 {
        theta: Angle,
    },
    Rotation4 {
        theta: Angle,
        b: [[f64; 2]; 2],
        trace_sign: i8,
    },
}

pub(crate) fn rotation(theta: f64) -> [[f64; 2]; 2] {
    let (s, c) = theta.sin_cos();
    [[c, -s], [s, c]]
}

fn sign_of(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

impl NormalFormBlock {
    pub fn dilation(lambda: f64) -> Result<Self> {
        let b = NormalFormBlock::Dilation { lambda };
        b.validate()?;
        Ok(b)
    }

    /// Only the sign of `b` matters.
    pub fn jordan2(lambda: f64, b: f64) -> Result<Self> {
        let l = if lambda == 1.0 {
            1
        } else if lambda == -1.0 {
            -1
        } else {
            return Err(Error::Invalid(format!(
                "jordan2 eigenvalue {lambda} must be ±1"
            )));
        };
        if !b.is_finite() {
            return Err(Error::Invalid("jordan2 b must be finite".into()));
        }
        Ok(NormalFormBlock::Jordan2 {
            lambda: l,
            b: sign_of(b),
        })
    }

    pub fn identity2() -> Self {
        NormalFormBlock::Jordan2 { lambda: 1, b: 0 }
    }

    pub fn minus_identity2() -> Self {
        NormalFormBlock::Jordan2 { lambda: -1, b: 0 }
    }

    pub fn rotation2(theta: Angle) -> Result<Self> {
        theta.check_rotation_range()?;
        Ok(NormalFormBlock::Rotation2 { theta })
    }

    pub fn rotation4(theta: Angle, b: [[f64; 2]; 2]) -> Result<Self> {
        theta.check_rotation_range()?;
        let t = theta.value();
        let r = rotation(t);
        // Rᵀb
        let rtb = |i: usize, j: usize| r[0][i] * b[0][j] + r[1][i] * b[1][j];
        let scale = b.iter().flatten().fold(1.0f64, |m, v| m.max(v.abs()));
        if (rtb(0, 1) - rtb(1, 0)).abs() > 1e-12 * scale {
            return Err(Error::Invalid(
                "rotation4 b must make R(θ)ᵀb symmetric for the block to be symplectic".into(),
            ));
        }
        let key = (b[0][1] - b[1][0]) * t.sin();
        if b[0][1] == b[1][0] || key == 0.0 {
            return Err(Error::Invalid("rotation4 requires b₂ ≠ b₃".into()));
        }
        Ok(NormalFormBlock::Rotation4 {
            theta,
            b,
            trace_sign: sign_of(key),
        })
    }

    /// A representative `N₂` block with the given sign of `(b₂ − b₃) sin θ`.
    pub fn rotation4_with_sign(theta: Angle, trace_sign: i8) -> Result<Self> {
        if trace_sign != 1 && trace_sign != -1 {
            return Err(Error::Invalid("trace_sign must be ±1".into()));
        }
        theta.check_rotation_range()?;
        // b = −s·R(θ): R(θ)ᵀb = −s·I is symmetric and (b₂ − b₃) sin θ = 2 s sin²θ.
        let r = rotation(theta.value());
        let s = -(trace_sign as f64);
        let b = [[s * r[0][0], s * r[0][1]], [s * r[1][0], s * r[1][1]]];
        Self::rotation4(theta, b)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            NormalFormBlock::Dilation { lambda } => {
                if lambda == 2.0 || lambda == -2.0 {
                    Ok(())
                } else {
                    Err(Error::Invalid(format!("dilation λ = {lambda} must be ±2")))
                }
            }
            NormalFormBlock::Jordan2 { lambda, b } => {
                if (lambda == 1 || lambda == -1) && (-1..=1).contains(&b) {
                    Ok(())
                } else {
                    Err(Error::Invalid(format!(
                        "invalid jordan2 (λ={lambda}, b={b})"
                    )))
                }
            }
            NormalFormBlock::Rotation2 { theta } => theta.check_rotation_range(),
            NormalFormBlock::Rotation4 {
                theta,
                b,
                trace_sign,
            } => {
                let fresh = Self::rotation4(theta, b)?;
                match fresh {
                    NormalFormBlock::Rotation4 { trace_sign: t, .. } if t == trace_sign => Ok(()),
                    _ => Err(Error::Invalid(
                        "rotation4 trace_sign does not match b".into(),
                    )),
                }
            }
        }
    }

    pub fn dim_half(&self) -> usize {
        match self {
            NormalFormBlock::Rotation4 { .. } => 2,
            _ => 1,
        }
    }

    /// Algebraic multiplicity of unit-circle eigenvalues.
    pub fn elliptic_height(&self) -> usize {
        match self {
            NormalFormBlock::Dilation { .. } => 0,
            NormalFormBlock::Rotation4 { .. } => 4,
            _ => 2,
        }
    }

    pub fn realize_matrix(&self) -> DMatrix<f64> {
        match *self {
            NormalFormBlock::Dilation { lambda } => {
                DMatrix::from_row_slice(2, 2, &[lambda, 0.0, 0.0, 1.0 / lambda])
            }
            NormalFormBlock::Jordan2 { lambda, b } => {
                DMatrix::from_row_slice(2, 2, &[lambda as f64, b as f64, 0.0, lambda as f64])
            }
            NormalFormBlock::Rotation2 { theta } => {
                let r = rotation(theta.value());
                DMatrix::from_row_slice(2, 2, &[r[0][0], r[0][1], r[1][0], r[1][1]])
            }
            NormalFormBlock::Rotation4 { theta, b, .. } => {
                let r = rotation(theta.value());
                let mut m = DMatrix::zeros(4, 4);
                for i in 0..2 {
                    for j in 0..2 {
                        m[(i, j)] = r[i][j];
                        m[(i + 2, j + 2)] = r[i][j];
                        m[(i, j + 2)] = b[i][j];
                    }
                }
                m
            }
        }
    }

    pub fn realize(&self) -> SymplecticMatrix {
        SymplecticMatrix::from_trusted(self.realize_matrix())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{is_symplectic, nullity_omega};
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn all_blocks() -> Vec<NormalFormBlock> {
        let mut v = vec![
            NormalFormBlock::dilation(2.0).unwrap(),
            NormalFormBlock::dilation(-2.0).unwrap(),
            NormalFormBlock::rotation2(Angle::radians(0.7)).unwrap(),
            NormalFormBlock::rotation2(Angle::radians(4.0)).unwrap(),
            NormalFormBlock::rotation4_with_sign(Angle::radians(1.1), 1).unwrap(),
            NormalFormBlock::rotation4_with_sign(Angle::radians(5.0), -1).unwrap(),
        ];
        for l in [1.0, -1.0] {
            for b in [1.0, 0.0, -1.0] {
                v.push(NormalFormBlock::jordan2(l, b).unwrap());
            }
        }
        v
    }

    #[test]
    fn every_block_realizes_symplectic() {
        for b in all_blocks() {
            assert!(is_symplectic(&b.realize_matrix(), 1e-12).unwrap(), "{b:?}");
        }
    }

    #[test]
    fn rotation4_sign_matches_formula() {
        for (t, s) in [(1.1, 1), (1.1, -1), (4.0, 1), (4.0, -1)] {
            let b = NormalFormBlock::rotation4_with_sign(Angle::radians(t), s).unwrap();
            let NormalFormBlock::Rotation4 {
                b: m, trace_sign, ..
            } = b
            else {
                unreachable!()
            };
            assert_eq!(trace_sign, s);
            assert_eq!(((m[0][1] - m[1][0]) * t.sin()).signum() as i8, s);
        }
    }

    #[test]
    fn rotation4_rejects_non_symplectic_b() {
        let e = NormalFormBlock::rotation4(Angle::radians(1.0), [[1.0, 0.0], [0.0, 1.0]]);
        assert!(e.is_err());
    }

    #[test]
    fn kernel_dimensions() {
        let c = |t: f64| Complex64::from_polar(1.0, t);
        let j = |l: f64, b: f64| NormalFormBlock::jordan2(l, b).unwrap().realize();
        assert_eq!(nullity_omega(&j(1.0, 1.0), c(0.0)).unwrap(), 1);
        assert_eq!(nullity_omega(&j(1.0, 0.0), c(0.0)).unwrap(), 2);
        assert_eq!(nullity_omega(&j(-1.0, -1.0), c(PI)).unwrap(), 1);
        assert_eq!(nullity_omega(&j(-1.0, 0.0), c(PI)).unwrap(), 2);
        let r = NormalFormBlock::rotation2(Angle::radians(0.9))
            .unwrap()
            .realize();
        assert_eq!(nullity_omega(&r, c(0.9)).unwrap(), 1);
        let r4 = NormalFormBlock::rotation4_with_sign(Angle::radians(0.9), 1)
            .unwrap()
            .realize();
        assert_eq!(nullity_omega(&r4, c(0.9)).unwrap(), 1);
    }
}

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::symplectic::NormalFormBlock;

/// `(S⁺(ω), S⁻(ω))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct SplittingPair {
    pub s_plus: u32,
    pub s_minus: u32,
}

impl SplittingPair {
    pub const ZERO: SplittingPair = SplittingPair {
        s_plus: 0,
        s_minus: 0,
    };

    fn new(s_plus: u32, s_minus: u32) -> Self {
        Self { s_plus, s_minus }
    }
}

impl std::ops::Add for SplittingPair {
    type Output = SplittingPair;
    fn add(self, o: Self) -> Self {
        SplittingPair::new(self.s_plus + o.s_plus, self.s_minus + o.s_minus)
    }
}

const MATCH_TOL: f64 = 1e-9;

fn near(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= MATCH_TOL
}

/// Splitting numbers of a basic normal form at a unit-modulus `ω`.
pub fn splitting_numbers(block: &NormalFormBlock, omega: Complex64) -> Result<SplittingPair> {
    if (omega.norm() - 1.0).abs() > MATCH_TOL {
        return Err(Error::Domain(format!("|ω| = {} is not 1", omega.norm())));
    }
    let one = Complex64::new(1.0, 0.0);
    Ok(match *block {
        NormalFormBlock::Dilation { .. } => SplittingPair::ZERO,
        NormalFormBlock::Jordan2 { lambda, b } => {
            let at = if lambda > 0 { one } else { -one };
            // b ≥ 0 at +1 and b ≤ 0 at −1 split; the opposite signs do not.
            let splits = if lambda > 0 { b >= 0 } else { b <= 0 };
            if near(omega, at) && splits {
                SplittingPair::new(1, 1)
            } else {
                SplittingPair::ZERO
            }
        }
        NormalFormBlock::Rotation2 { theta } => {
            let e = Complex64::from_polar(1.0, theta.value());
            if near(omega, e) {
                SplittingPair::new(0, 1)
            } else if near(omega, e.conj()) {
                SplittingPair::new(1, 0)
            } else {
                SplittingPair::ZERO
            }
        }
        NormalFormBlock::Rotation4 {
            theta, trace_sign, ..
        } => {
            let e = Complex64::from_polar(1.0, theta.value());
            if trace_sign < 0 && (near(omega, e) || near(omega, e.conj())) {
                SplittingPair::new(1, 1)
            } else {
                SplittingPair::ZERO
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::Angle;

    fn at(t: f64) -> Complex64 {
        Complex64::from_polar(1.0, t)
    }

    #[test]
    fn jordan_cases() {
        let j = |l: f64, b: f64| NormalFormBlock::jordan2(l, b).unwrap();
        assert_eq!(
            splitting_numbers(&j(1.0, 1.0), at(0.0)).unwrap(),
            SplittingPair::new(1, 1)
        );
        assert_eq!(
            splitting_numbers(&j(1.0, -1.0), at(0.0)).unwrap(),
            SplittingPair::ZERO
        );
        assert_eq!(
            splitting_numbers(&j(1.0, 0.0), at(0.0)).unwrap(),
            SplittingPair::new(1, 1)
        );
        let pi = std::f64::consts::PI;
        assert_eq!(
            splitting_numbers(&j(-1.0, -1.0), at(pi)).unwrap(),
            SplittingPair::new(1, 1)
        );
        assert_eq!(
            splitting_numbers(&j(-1.0, 1.0), at(pi)).unwrap(),
            SplittingPair::ZERO
        );
        assert_eq!(
            splitting_numbers(&j(1.0, 1.0), at(1.0)).unwrap(),
            SplittingPair::ZERO
        );
    }

    #[test]
    fn rotation_cases() {
        let r = NormalFormBlock::rotation2(Angle::radians(0.9)).unwrap();
        assert_eq!(
            splitting_numbers(&r, at(0.9)).unwrap(),
            SplittingPair::new(0, 1)
        );
        assert_eq!(
            splitting_numbers(&r, at(-0.9)).unwrap(),
            SplittingPair::new(1, 0)
        );
        assert_eq!(splitting_numbers(&r, at(0.3)).unwrap(), SplittingPair::ZERO);
        let n8 = NormalFormBlock::rotation4_with_sign(Angle::radians(0.9), -1).unwrap();
        assert_eq!(
            splitting_numbers(&n8, at(0.9)).unwrap(),
            SplittingPair::new(1, 1)
        );
        let n9 = NormalFormBlock::rotation4_with_sign(Angle::radians(0.9), 1).unwrap();
        assert_eq!(
            splitting_numbers(&n9, at(0.9)).unwrap(),
            SplittingPair::ZERO
        );
    }

    #[test]
    fn off_circle_rejected() {
        let d = NormalFormBlock::dilation(2.0).unwrap();
        assert!(splitting_numbers(&d, Complex64::new(0.5, 0.0)).is_err());
    }
}

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An angle in radians, either a plain float or an exact rational multiple of π.
///
/// Rational angles let the index formulas decide integer boundaries exactly.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Angle {
    /// `num/den · π`, with `den > 0`.
    PiRatio {
        num: i64,
        den: i64,
    },
    Radians(f64),
}

impl Angle {
    pub fn radians(theta: f64) -> Self {
        Angle::Radians(theta)
    }

    pub fn pi_ratio(num: i64, den: i64) -> Result<Self> {
        if den <= 0 {
            return Err(Error::Invalid(format!(
                "angle denominator {den} must be positive"
            )));
        }
        let g = gcd(num.unsigned_abs(), den as u64) as i64;
        Ok(Angle::PiRatio {
            num: num / g,
            den: den / g,
        })
    }

    pub fn value(self) -> f64 {
        match self {
            Angle::PiRatio { num, den } => PI * num as f64 / den as f64,
            Angle::Radians(t) => t,
        }
    }

    /// `θ ∈ (0, π) ∪ (π, 2π)`, the admissible range for rotation blocks.
    pub fn check_rotation_range(self) -> Result<()> {
        let ok = match self {
            Angle::PiRatio { num, den } => num > 0 && num < 2 * den && num != den,
            Angle::Radians(t) => t > 0.0 && t < 2.0 * PI && t != PI,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Invalid(format!(
                "rotation angle {} outside (0,π)∪(π,2π)",
                self.value()
            )))
        }
    }

    /// `2π − θ`.
    pub fn reflected(self) -> Self {
        match self {
            Angle::PiRatio { num, den } => Angle::PiRatio {
                num: 2 * den - num,
                den,
            },
            Angle::Radians(t) => Angle::Radians(2.0 * PI - t),
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_is_reduced() {
        assert_eq!(
            Angle::pi_ratio(4, 6).unwrap(),
            Angle::PiRatio { num: 2, den: 3 }
        );
        assert!(Angle::pi_ratio(1, 0).is_err());
    }

    #[test]
    fn rotation_range() {
        assert!(Angle::pi_ratio(1, 1)
            .unwrap()
            .check_rotation_range()
            .is_err());
        assert!(Angle::pi_ratio(3, 2)
            .unwrap()
            .check_rotation_range()
            .is_ok());
        assert!(Angle::radians(0.0).check_rotation_range().is_err());
        assert!(Angle::radians(6.0).check_rotation_range().is_ok());
    }
}

//! `[a]` (floor), `E(a)` (ceiling) and `φ(a) = E(a) − [a]`, exact for rationals.

use crate::symplectic::Angle;

/// Boundary tolerance for float arguments.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// `num/den` with `den > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rational {
    pub num: i64,
    pub den: i64,
}

/// A real argument; `snapped` records that a float landed within the boundary
/// tolerance of an integer and was treated as that integer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Real {
    Exact(Rational),
    Float { value: f64, snapped: bool },
}

impl Real {
    pub fn from_f64(x: f64) -> Self {
        let r = x.round();
        if (x - r).abs() <= BOUNDARY_TOL * x.abs().max(1.0) {
            Real::Float {
                value: r,
                snapped: true,
            }
        } else {
            Real::Float {
                value: x,
                snapped: false,
            }
        }
    }

    pub fn snapped(self) -> bool {
        matches!(self, Real::Float { snapped: true, .. })
    }

    /// `(2m−1)θ/2π + 1/2`, the argument of the rotation cases.
    pub fn rotation_argument(theta: Angle, m: u32) -> Self {
        let k = 2 * m as i64 - 1;
        match theta {
            Angle::PiRatio { num, den } => Real::Exact(Rational {
                num: k * num + den,
                den: 2 * den,
            }),
            Angle::Radians(t) => Real::from_f64(k as f64 * t / (2.0 * std::f64::consts::PI) + 0.5),
        }
    }
}

pub fn floor_int(a: Real) -> i64 {
    match a {
        Real::Exact(Rational { num, den }) => num.div_euclid(den),
        Real::Float { value, .. } => value.floor() as i64,
    }
}

pub fn ceil_e(a: Real) -> i64 {
    match a {
        Real::Exact(Rational { num, den }) => -(-num).div_euclid(den),
        Real::Float { value, .. } => value.ceil() as i64,
    }
}

/// 0 on integers, 1 elsewhere.
pub fn frac_gap(a: Real) -> i64 {
    ceil_e(a) - floor_int(a)
}

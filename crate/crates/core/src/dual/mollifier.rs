use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

/// Shape parameters of the mollifier `φ`.
///
/// `φ″` is a cubic in `t/t₀` on `[0, t₀]`, `φ = c·t^α` on `[t₀, t₁]` and a
/// quadratic beyond `t₁`. The joins sit where `φ′(t)/t` equals `g_hi` and
/// `theta_cap` respectively, and all three pieces meet to second order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MollifierSpec {
    pub alpha: f64,
    pub c: f64,
    pub g_hi: f64,
    pub theta_cap: f64,
}

impl Default for MollifierSpec {
    fn default() -> Self {
        Self {
            alpha: 1.5,
            c: 0.5,
            g_hi: 0.4,
            theta_cap: 0.05,
        }
    }
}

/// A `C²` convex function with `φ(0) = φ′(0) = 0`, `φ″(0) = 1`, `φ′(t)/t` strictly
/// decreasing, homogeneous of degree `α` on a middle band and quadratic at infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mollifier {
    spec: MollifierSpec,
    t0: f64,
    t1: f64,
    /// `φ″(t) = 1 + p[0]ρ + p[1]ρ² + p[2]ρ³` with `ρ = t/t₀` on `[0, t₀]`.
    p: [f64; 3],
    cap: [f64; 3],
    sigma: f64,
}

impl Mollifier {
    pub fn new(spec: MollifierSpec) -> Result<Self> {
        let MollifierSpec {
            alpha,
            c,
            g_hi,
            theta_cap,
        } = spec;
        if !(alpha > 1.0 && alpha < 2.0) {
            return Err(Error::Invalid(format!(
                "alpha = {alpha} must lie in (1, 2)"
            )));
        }
        if !(c > 0.0 && c < 1.0) {
            return Err(Error::Invalid(format!("c = {c} must lie in (0, 1)")));
        }
        if !(theta_cap > 0.0 && theta_cap < g_hi && g_hi < 1.0) {
            return Err(Error::Invalid(format!(
                "need 0 < theta_cap < g_hi < 1 (got {theta_cap}, {g_hi})"
            )));
        }
        let join = |g: f64| (g / (c * alpha)).powf(1.0 / (alpha - 2.0));
        let (t0, t1) = (join(g_hi), join(theta_cap));

        // P(1) = (α−1)g, ∫P = g, ∫(1−ρ)P = g/α, with P(0) = 1.
        let m = Matrix3::new(
            1.0,
            1.0,
            1.0, //
            0.5,
            1.0 / 3.0,
            0.25, //
            1.0 / 6.0,
            1.0 / 12.0,
            1.0 / 20.0,
        );
        let rhs = Vector3::new((alpha - 1.0) * g_hi - 1.0, g_hi - 1.0, g_hi / alpha - 0.5);
        let sol = m
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::Invalid("mollifier join system is singular".into()))?;
        let p = [sol[0], sol[1], sol[2]];

        let poly = |r: f64| 1.0 + r * (p[0] + r * (p[1] + r * p[2]));
        let avg = |r: f64| 1.0 + r * (p[0] / 2.0 + r * (p[1] / 3.0 + r * p[2] / 4.0));
        let mut min_p = f64::INFINITY;
        for k in 1..=4000 {
            let r = k as f64 / 4000.0;
            let v = poly(r);
            min_p = min_p.min(v).min(avg(r));
            if v <= 0.0 || v >= avg(r) {
                return Err(Error::Invalid(format!(
                    "no convex join for alpha = {alpha}, g_hi = {g_hi}; lower g_hi"
                )));
            }
        }
        let cap = [
            c * t1.powf(alpha),
            c * alpha * t1.powf(alpha - 1.0),
            c * alpha * (alpha - 1.0) * t1.powf(alpha - 2.0),
        ];
        let sigma = min_p.min((alpha - 1.0) * theta_cap);
        Ok(Self {
            spec,
            t0,
            t1,
            p,
            cap,
            sigma,
        })
    }

    pub fn spec(&self) -> MollifierSpec {
        self.spec
    }

    /// Join radii `(t₀, t₁)` bounding the homogeneous band.
    pub fn joins(&self) -> (f64, f64) {
        (self.t0, self.t1)
    }

    /// Lower bound of `min(φ′(t)/t, φ″(t))` over `t > 0`.
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Limit of `φ′(t)/t` as `t → ∞`.
    pub fn ratio_at_infinity(&self) -> f64 {
        self.cap[2]
    }

    /// `(φ, φ′, φ″)` at `t ≥ 0`.
    pub fn eval(&self, t: f64) -> Result<(f64, f64, f64)> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("mollifier argument {t} is negative")));
        }
        Ok(self.eval_unchecked(t))
    }

    pub(crate) fn eval_unchecked(&self, t: f64) -> (f64, f64, f64) {
        let MollifierSpec { alpha, c, .. } = self.spec;
        if t <= self.t0 {
            let [p1, p2, p3] = self.p;
            let r = t / self.t0;
            let d2 = 1.0 + r * (p1 + r * (p2 + r * p3));
            let d1 = self.t0 * r * (1.0 + r * (p1 / 2.0 + r * (p2 / 3.0 + r * p3 / 4.0)));
            let d0 = self.t0
                * self.t0
                * r
                * r
                * (0.5 + r * (p1 / 6.0 + r * (p2 / 12.0 + r * p3 / 20.0)));
            (d0, d1, d2)
        } else if t <= self.t1 {
            let pa = c * t.powf(alpha);
            (pa, alpha * pa / t, alpha * (alpha - 1.0) * pa / (t * t))
        } else {
            let s = t - self.t1;
            let [a0, a1, a2] = self.cap;
            (a0 + s * (a1 + 0.5 * a2 * s), a1 + a2 * s, a2)
        }
    }

    /// `φ′(t)/t`, equal to 1 at `t = 0`.
    pub fn ratio(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 1.0;
        }
        self.eval_unchecked(t).1 / t
    }

    /// Inverse of the strictly increasing `φ′`.
    pub(crate) fn inverse_derivative(&self, target: f64) -> f64 {
        if target <= 0.0 {
            return 0.0;
        }
        let (mut lo, mut hi) = (0.0, 1.0);
        while self.eval_unchecked(hi).1 < target {
            lo = hi;
            hi *= 2.0;
        }
        let mut t = 0.5 * (lo + hi);
        for _ in 0..200 {
            let (_, d1, d2) = self.eval_unchecked(t);
            let f = d1 - target;
            if f.abs() <= 1e-15 * target {
                return t;
            }
            if f > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let newton = t - f / d2;
            t = if newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        t
    }
}

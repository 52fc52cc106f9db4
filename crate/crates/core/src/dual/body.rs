use crate::error::{Error, Result};

/// A centrally symmetric convex body described by its gauge `j`, with `Σ = j⁻¹(1)`.
///
/// Vectors have length `2n` in the ordering `(x₁..xₙ, y₁..yₙ)`; Hessians are
/// row-major `2n×2n`.
pub trait ConvexBody: Sync + Send {
    fn dim_half(&self) -> usize;
    fn gauge(&self, x: &[f64]) -> f64;
    fn gauge_grad(&self, x: &[f64], out: &mut [f64]);
    fn gauge_hess(&self, x: &[f64], out: &mut [f64]);
    /// Radius of the largest centred ball inside the body.
    fn inradius(&self) -> f64;
    /// Half-width of the body along coordinate `k` (`1 / j(e_k)`).
    fn extent(&self, k: usize) -> f64 {
        let mut e = vec![0.0; 2 * self.dim_half()];
        e[k] = 1.0;
        1.0 / self.gauge(&e)
    }
}

/// `j(x) = sqrt(Σ_k (x_k² + x_{k+n}²) / r_k²)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ellipsoid {
    semi_axes: Vec<f64>,
    weights: Vec<f64>,
}

impl Ellipsoid {
    pub fn new(semi_axes: Vec<f64>) -> Result<Self> {
        if semi_axes.is_empty() {
            return Err(Error::Invalid(
                "ellipsoid needs at least one semi-axis".into(),
            ));
        }
        if semi_axes.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
            return Err(Error::Invalid(format!(
                "semi-axes must be positive: {semi_axes:?}"
            )));
        }
        let n = semi_axes.len();
        let weights = (0..2 * n).map(|i| 1.0 / semi_axes[i % n].powi(2)).collect();
        Ok(Self { semi_axes, weights })
    }

    pub fn semi_axes(&self) -> &[f64] {
        &self.semi_axes
    }

    /// Periods `2π r_k²` of the planar circles in each coordinate plane.
    pub fn planar_periods(&self) -> Vec<f64> {
        self.semi_axes
            .iter()
            .map(|r| 2.0 * std::f64::consts::PI * r * r)
            .collect()
    }
}

impl ConvexBody for Ellipsoid {
    fn dim_half(&self) -> usize {
        self.semi_axes.len()
    }

    fn gauge(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(&self.weights)
            .map(|(v, w)| w * v * v)
            .sum::<f64>()
            .sqrt()
    }

    fn gauge_grad(&self, x: &[f64], out: &mut [f64]) {
        let j = self.gauge(x);
        for ((o, v), w) in out.iter_mut().zip(x).zip(&self.weights) {
            *o = w * v / j;
        }
    }

    fn gauge_hess(&self, x: &[f64], out: &mut [f64]) {
        let d = x.len();
        let j = self.gauge(x);
        for a in 0..d {
            let ga = self.weights[a] * x[a] / j;
            for b in 0..d {
                let gb = self.weights[b] * x[b] / j;
                let diag = if a == b { self.weights[a] } else { 0.0 };
                out[a * d + b] = (diag - ga * gb) / j;
            }
        }
    }

    fn inradius(&self) -> f64 {
        self.semi_axes.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

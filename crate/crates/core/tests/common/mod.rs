//! Test oracles and random generators shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use sympindex::index::{BlockPath, Decomposition};
use sympindex::symplectic::{nullity_omega_with, Angle, NormalFormBlock};

/// Argument of a unit-circle point in units of π, in `[0, 2)`.
#[derive(Clone, Copy, Debug)]
pub enum ArgPi {
    Exact(i64, i64),
    Float(f64),
}

impl ArgPi {
    fn of(theta: Angle) -> Self {
        match theta {
            Angle::PiRatio { num, den } => ArgPi::Exact(num, den),
            Angle::Radians(t) => ArgPi::Float(t / PI),
        }
    }

    fn reflected(self) -> Self {
        match self {
            ArgPi::Exact(n, d) => ArgPi::Exact(2 * d - n, d),
            ArgPi::Float(x) => ArgPi::Float(2.0 - x),
        }
    }

    /// Sign of `self − a/b`.
    fn cmp_ratio(self, a: i64, b: i64) -> std::cmp::Ordering {
        match self {
            ArgPi::Exact(n, d) => (n as i128 * b as i128).cmp(&(a as i128 * d as i128)),
            ArgPi::Float(x) => x.total_cmp(&(a as f64 / b as f64)),
        }
    }
}

/// Eigenvalue points of a block on the unit circle away from 1, with their
/// `(S⁺, S⁻)`, read off the normal form directly.
fn jump_points(block: &NormalFormBlock) -> Vec<(ArgPi, i64, i64)> {
    match *block {
        NormalFormBlock::Dilation { .. } => vec![],
        NormalFormBlock::Jordan2 { lambda: 1, .. } => vec![],
        NormalFormBlock::Jordan2 { b, .. } => {
            let s = if b <= 0 { 1 } else { 0 };
            vec![(ArgPi::Exact(1, 1), s, s)]
        }
        NormalFormBlock::Rotation2 { theta } => {
            let a = ArgPi::of(theta);
            vec![(a, 0, 1), (a.reflected(), 1, 0)]
        }
        NormalFormBlock::Rotation4 {
            theta, trace_sign, ..
        } => {
            let s = if trace_sign < 0 { 1 } else { 0 };
            let a = ArgPi::of(theta);
            vec![(a, s, s), (a.reflected(), s, s)]
        }
    }
}

fn s_plus_at_one(block: &NormalFormBlock) -> i64 {
    match *block {
        NormalFormBlock::Jordan2 { lambda: 1, b } if b >= 0 => 1,
        _ => 0,
    }
}

/// `i₋₁` of the `(2m−1)`-th iterate by walking the circle from 1 to every
/// `(2m−1)`-th root of −1 and summing the `ω`-indices.
pub fn walker_index(bp: &BlockPath, m: u32) -> i64 {
    let k = 2 * m as i64 - 1;
    let points = jump_points(&bp.block);
    let mut total = 0;
    for j in 1..=k {
        // ω_j = e^{iπ(2j−1)/k}
        let (a, b) = (2 * j - 1, k);
        let mut i_omega = bp.i1 + s_plus_at_one(&bp.block);
        for &(p, sp, sm) in &points {
            match p.cmp_ratio(a, b) {
                std::cmp::Ordering::Less => i_omega += sp - sm,
                std::cmp::Ordering::Equal => i_omega -= sm,
                std::cmp::Ordering::Greater => {}
            }
        }
        total += i_omega;
    }
    total
}

/// `ν₋₁` of the `(2m−1)`-th iterate as a sum of numerical kernel dimensions.
///
/// The rank cut is tight because a near miss on an `N₂` eigenvalue at distance
/// `δ` only lifts the smallest singular value to about `δ²`.
pub fn walker_nullity(block: &NormalFormBlock, m: u32) -> usize {
    let k = 2 * m as i64 - 1;
    let mat = block.realize();
    (1..=k)
        .map(|j| {
            let w = Complex64::from_polar(1.0, PI * (2 * j - 1) as f64 / k as f64);
            nullity_omega_with(&mat, w, 1e-11).unwrap()
        })
        .sum()
}

pub fn random_angle(rng: &mut impl Rng) -> Angle {
    if rng.random_bool(0.5) {
        let den = rng.random_range(2..=60i64);
        loop {
            let num = rng.random_range(1..2 * den);
            if num != den {
                return Angle::pi_ratio(num, den).unwrap();
            }
        }
    } else {
        Angle::radians(rng.random_range(1e-3..2.0 * PI - 1e-3))
    }
}

/// A random half-dimension-1 block.
pub fn random_small_block(rng: &mut impl Rng) -> NormalFormBlock {
    match rng.random_range(0..4) {
        0 => NormalFormBlock::dilation(if rng.random_bool(0.5) { 2.0 } else { -2.0 }).unwrap(),
        1 => NormalFormBlock::jordan2(1.0, rng.random_range(-1..=1) as f64).unwrap(),
        2 => NormalFormBlock::jordan2(-1.0, rng.random_range(-1..=1) as f64).unwrap(),
        _ => loop {
            let theta = random_angle(rng);
            if let Ok(b) = NormalFormBlock::rotation2(theta) {
                return b;
            }
        },
    }
}

pub fn random_block(rng: &mut impl Rng) -> NormalFormBlock {
    if rng.random_bool(0.2) {
        loop {
            let theta = random_angle(rng);
            let sign = if rng.random_bool(0.5) { 1 } else { -1 };
            if let Ok(b) = NormalFormBlock::rotation4_with_sign(theta, sign) {
                return b;
            }
        }
    } else {
        random_small_block(rng)
    }
}

/// Blocks filling half-dimension `n`, each with a random `i₁` in `i1_range`.
pub fn random_decomposition(
    rng: &mut impl Rng,
    n: usize,
    i1_range: std::ops::RangeInclusive<i64>,
) -> Decomposition {
    let mut blocks = Vec::new();
    let mut used = 0;
    while used < n {
        let block = if n - used >= 2 {
            random_block(rng)
        } else {
            random_small_block(rng)
        };
        used += block.dim_half();
        blocks.push(BlockPath {
            block,
            i1: rng.random_range(i1_range.clone()),
        });
    }
    Decomposition::new(n, blocks).unwrap()
}

/// Leading `−I₂`, then random blocks with rotation angles in
/// `[0.2, 2π − 0.2]`; total `i₁` at least `n`, and mostly equal to `n`,
/// where the first gap usually comes from a rotation.
pub fn random_gap_decomposition(rng: &mut impl Rng, n: usize) -> Decomposition {
    let mut blocks = vec![NormalFormBlock::minus_identity2()];
    let mut used = 1;
    while used < n {
        let block = loop {
            let b = if n - used >= 2 {
                random_block(rng)
            } else {
                random_small_block(rng)
            };
            let ok = match b {
                NormalFormBlock::Rotation2 { theta } | NormalFormBlock::Rotation4 { theta, .. } => {
                    let t = theta.value();
                    (0.2..=2.0 * PI - 0.2).contains(&t)
                }
                _ => true,
            };
            if ok {
                break b;
            }
        };
        used += block.dim_half();
        blocks.push(block);
    }
    let total = if rng.random_bool(0.8) {
        n as i64
    } else {
        rng.random_range(n as i64 + 1..=n as i64 + 4)
    };
    Decomposition::with_total_i1(&blocks, total).unwrap()
}

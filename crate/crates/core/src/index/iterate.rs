use serde::Serialize;

use super::decomposition::{BlockPath, Decomposition};
use super::helpers::{ceil_e, frac_gap, Real};
use crate::error::{Error, Result};
use crate::symplectic::NormalFormBlock;

/// `i₋₁(γ^{2m−1})` and `ν₋₁(γ^{2m−1})` for one odd iterate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IterationIndex {
    pub m: u32,
    pub i_minus1: i64,
    pub nu_minus1: u32,
    /// A float angle put the rotation argument within `1e-12` of an integer.
    pub boundary_warning: bool,
}

impl IterationIndex {
    /// Morse index of the `(2m−1)`-th iterate of the critical point.
    pub fn orbit_index(&self) -> i64 {
        self.i_minus1
    }

    /// Nullity of the critical point: one less than `ν₋₁`, the loop direction.
    pub fn orbit_nullity(&self) -> i64 {
        self.nu_minus1 as i64 - 1
    }
}

fn overflow() -> Error {
    Error::Domain("index arithmetic overflowed i64".into())
}

fn odd(m: u32) -> Result<i64> {
    if m == 0 {
        return Err(Error::Domain("iterate m must be ≥ 1".into()));
    }
    (2 * m as i64).checked_sub(1).ok_or_else(overflow)
}

fn mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or_else(overflow)
}

/// Closed-form index and nullity of the `(2m−1)`-th iterate of one block.
pub fn iterate_block(bp: &BlockPath, m: u32) -> Result<IterationIndex> {
    let k = odd(m)?;
    let i1 = bp.i1;
    let mut warn = false;
    let (i, nu) = match bp.block {
        NormalFormBlock::Dilation { .. } => (mul(k, i1)?, 0),
        NormalFormBlock::Jordan2 { lambda: 1, b } if b >= 0 => {
            (mul(k, i1.checked_add(1).ok_or_else(overflow)?)?, 0)
        }
        NormalFormBlock::Jordan2 { lambda: 1, .. } => (mul(k, i1)?, 0),
        NormalFormBlock::Jordan2 { b, .. } if b < 0 => (mul(k, i1)? - 1, 1),
        NormalFormBlock::Jordan2 { b: 0, .. } => (mul(k, i1)? - 1, 2),
        NormalFormBlock::Jordan2 { .. } => (mul(k, i1)?, 1),
        NormalFormBlock::Rotation2 { theta } => {
            let x = Real::rotation_argument(theta, m);
            warn = x.snapped();
            (
                mul(k, i1 - 1)? + 2 * ceil_e(x) - 2,
                (2 - 2 * frac_gap(x)) as u32,
            )
        }
        NormalFormBlock::Rotation4 {
            theta, trace_sign, ..
        } => {
            let x = Real::rotation_argument(theta, m);
            warn = x.snapped();
            let phi = frac_gap(x);
            let i = if trace_sign < 0 {
                mul(k, i1)? + 2 * phi - 2
            } else {
                mul(k, i1)?
            };
            (i, (2 - 2 * phi) as u32)
        }
    };
    Ok(IterationIndex {
        m,
        i_minus1: i,
        nu_minus1: nu,
        boundary_warning: warn,
    })
}

/// Blockwise sum of [`iterate_block`].
pub fn iterate(d: &Decomposition, m: u32) -> Result<IterationIndex> {
    let mut acc = IterationIndex {
        m,
        i_minus1: 0,
        nu_minus1: 0,
        boundary_warning: false,
    };
    for b in d.blocks() {
        let r = iterate_block(b, m)?;
        acc.i_minus1 = acc.i_minus1.checked_add(r.i_minus1).ok_or_else(overflow)?;
        acc.nu_minus1 += r.nu_minus1;
        acc.boundary_warning |= r.boundary_warning;
    }
    Ok(acc)
}

/// `(lhs, rhs)` with `lhs = i(m+1) − i(m) − ν(m)` and `rhs = 2·i₁ − e(M)`.
pub fn gap_lower_bound(d: &Decomposition, m: u32) -> Result<(i64, i64)> {
    let a = iterate(d, m)?;
    let b = iterate(d, m.checked_add(1).ok_or_else(overflow)?)?;
    let lhs = b.i_minus1 - a.i_minus1 - a.nu_minus1 as i64;
    let rhs = 2 * d.total_i1() - d.elliptic_height() as i64;
    Ok((lhs, rhs))
}

/// Smallest `m ≤ m_max` with `i(m+1) − i(m) ≥ 4`.
///
/// Requires a leading `−I₂` block, `n ≥ 2` and total `i₁ ≥ n`.
pub fn find_gap_m(d: &Decomposition, m_max: u32) -> Result<u32> {
    if d.n() < 2 {
        return Err(Error::Invalid("gap search needs n ≥ 2".into()));
    }
    if d.blocks()[0].block != NormalFormBlock::minus_identity2() {
        return Err(Error::Invalid(
            "gap search needs a leading −I₂ block".into(),
        ));
    }
    d.validate_convex()?;
    let mut max_gap = i64::MIN;
    let mut prev = iterate(d, 1)?;
    for m in 1..=m_max {
        let next = iterate(d, m + 1)?;
        let gap = next.i_minus1 - prev.i_minus1;
        if gap >= 4 {
            return Ok(m);
        }
        max_gap = max_gap.max(gap);
        prev = next;
    }
    Err(Error::SearchExhausted { m_max, max_gap })
}

/// Conversion from the Maslov-type index to the Ekeland index: `i − n`.
pub fn ekeland_index(i_maslov: i64, n: usize) -> Result<i64> {
    if n == 0 {
        return Err(Error::Domain("n must be ≥ 1".into()));
    }
    i_maslov.checked_sub(n as i64).ok_or_else(overflow)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::Angle;

    fn bp(block: NormalFormBlock, i1: i64) -> BlockPath {
        BlockPath { block, i1 }
    }

    fn pair(bp: &BlockPath, m: u32) -> (i64, u32) {
        let r = iterate_block(bp, m).unwrap();
        (r.i_minus1, r.nu_minus1)
    }

    #[test]
    fn block_examples() {
        assert_eq!(pair(&bp(NormalFormBlock::identity2(), 3), 1), (4, 0));
        assert_eq!(pair(&bp(NormalFormBlock::minus_identity2(), 1), 2), (2, 2));
        let r = NormalFormBlock::rotation2(Angle::pi_ratio(1, 2).unwrap()).unwrap();
        assert_eq!(pair(&bp(r, 1), 1), (0, 0));
        let r = NormalFormBlock::rotation2(Angle::radians(std::f64::consts::FRAC_PI_2)).unwrap();
        assert_eq!(pair(&bp(r, 1), 1), (0, 0));
        assert_eq!(
            pair(&bp(NormalFormBlock::dilation(2.0).unwrap(), 1), 3),
            (5, 0)
        );
    }

    #[test]
    fn m_zero_rejected() {
        assert!(iterate_block(&bp(NormalFormBlock::identity2(), 1), 0).is_err());
    }

    #[test]
    fn decomposition_examples() {
        let d = Decomposition::new(
            2,
            vec![
                bp(NormalFormBlock::minus_identity2(), 1),
                bp(NormalFormBlock::dilation(2.0).unwrap(), 1),
            ],
        )
        .unwrap();
        let r = iterate(&d, 1).unwrap();
        assert_eq!((r.i_minus1, r.nu_minus1, r.orbit_nullity()), (1, 2, 1));
        assert_eq!(find_gap_m(&d, 50).unwrap(), 1);

        let d = Decomposition::new(1, vec![bp(NormalFormBlock::identity2(), 1)]).unwrap();
        for m in 1..6 {
            assert_eq!(iterate(&d, m).unwrap().i_minus1, (2 * m as i64 - 1) * 2);
        }
    }

    #[test]
    fn gap_examples() {
        let one = |b, i1| Decomposition::new(1, vec![bp(b, i1)]).unwrap();
        for m in 1..5 {
            assert_eq!(
                gap_lower_bound(&one(NormalFormBlock::minus_identity2(), 1), m).unwrap(),
                (0, 0)
            );
            assert_eq!(
                gap_lower_bound(&one(NormalFormBlock::dilation(2.0).unwrap(), 2), m).unwrap(),
                (4, 4)
            );
            let j = NormalFormBlock::jordan2(1.0, 1.0).unwrap();
            assert_eq!(gap_lower_bound(&one(j, 1), m).unwrap(), (4, 0));
        }
    }

    #[test]
    fn gap_search_with_irrational_rotation() {
        let theta = 2f64.sqrt() - 1.0;
        let d = Decomposition::new(
            2,
            vec![
                bp(NormalFormBlock::minus_identity2(), 1),
                bp(
                    NormalFormBlock::rotation2(Angle::radians(theta)).unwrap(),
                    1,
                ),
            ],
        )
        .unwrap();
        let e = |m: u32| ((2 * m - 1) as f64 * theta / (2.0 * std::f64::consts::PI) + 0.5).ceil();
        let want = (1..).find(|&m| e(m + 1) > e(m)).unwrap();
        assert_eq!(find_gap_m(&d, 50).unwrap(), want);

        let d = Decomposition::new(
            2,
            vec![
                bp(NormalFormBlock::minus_identity2(), 2),
                bp(NormalFormBlock::identity2(), 1),
            ],
        )
        .unwrap();
        assert_eq!(find_gap_m(&d, 50).unwrap(), 1);
    }

    #[test]
    fn gap_search_preconditions() {
        let d = Decomposition::new(
            2,
            vec![
                bp(NormalFormBlock::dilation(2.0).unwrap(), 1),
                bp(NormalFormBlock::minus_identity2(), 1),
            ],
        )
        .unwrap();
        assert!(matches!(find_gap_m(&d, 10), Err(Error::Invalid(_))));
    }

    #[test]
    fn ekeland() {
        assert_eq!(ekeland_index(3, 3).unwrap(), 0);
        assert_eq!(ekeland_index(5, 3).unwrap(), 2);
        assert!(ekeland_index(1, 0).is_err());
    }
}

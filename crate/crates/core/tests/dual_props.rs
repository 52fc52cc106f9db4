use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sympindex::dual::*;
use sympindex::exec::Execution;
use sympindex::Error;

fn random_loop(seed: u64, n: usize, modes: usize, size: f64) -> AntiperiodicLoop {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut u = AntiperiodicLoop::zeros(n, modes).unwrap();
    for q in 0..modes {
        let k = u.frequency(q);
        for i in 0..n {
            let z = Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
            u.set_coeff(k, i, z / (k * k) as f64).unwrap();
        }
    }
    let norm = u.norm();
    u.scale(size / norm)
}

fn ellipsoid() -> (Ellipsoid, DualParams) {
    let body = Ellipsoid::new(vec![1.0, 1.3]).unwrap();
    let p = DualParams::for_ellipsoid(&body, MollifierSpec::default()).unwrap();
    (body, p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn m_is_antisymmetric(s1 in any::<u64>(), s2 in any::<u64>()) {
        let u = random_loop(s1, 3, 32, 1.0);
        let v = random_loop(s2, 3, 32, 1.0);
        let lhs = u.m_operator().inner(&v) + u.inner(&v.m_operator());
        prop_assert!(lhs.abs() <= 1e-12 * u.norm() * v.norm());
    }

    #[test]
    fn m_commutes_with_shifts(s in any::<u64>(), theta in 0.0f64..1.0) {
        let u = random_loop(s, 2, 16, 1.0);
        // Equal up to the rounding of one complex product per coefficient.
        let (a, b) = (u.shift(theta).m_operator(), u.m_operator().shift(theta));
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            prop_assert!((x - y).norm() <= 4.0 * f64::EPSILON * x.norm());
        }
    }

    #[test]
    fn m_operator_bound(s in any::<u64>()) {
        let u = random_loop(s, 2, 16, 1.0);
        prop_assert!(u.m_operator().norm() <= u.norm() / (2.0 * PI) * (1.0 + 1e-14));
    }

    #[test]
    fn m_is_a_primitive(s in any::<u64>(), t in 0.0f64..1.0) {
        let u = random_loop(s, 2, 8, 1.0);
        let back = u.m_operator().derivative();
        let (a, b) = (back.eval(t), u.eval(t));
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }
}

#[test]
fn m_bound_is_attained_only_on_first_modes() {
    let mut u = AntiperiodicLoop::zeros(2, 8).unwrap();
    u.set_coeff(1, 0, Complex64::new(0.3, -1.0)).unwrap();
    u.set_coeff(-1, 1, Complex64::new(2.0, 0.5)).unwrap();
    assert!((u.m_operator().norm() - u.norm() / (2.0 * PI)).abs() < 1e-14);
    u.set_coeff(3, 0, Complex64::new(0.1, 0.0)).unwrap();
    assert!(u.m_operator().norm() < u.norm() / (2.0 * PI) * (1.0 - 1e-6));
}

#[test]
fn action_is_shift_invariant() {
    let (body, p) = ellipsoid();
    let action = DualAction::new(&body, p, 16, 512, Execution::Sequential).unwrap();
    let mut r = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for s in 0..5 {
        let u = random_loop(s, 2, 16, 20.0);
        let base = action.value(&u).unwrap();
        for _ in 0..100 {
            let theta = r.random_range(0.0..1.0);
            let shifted = action.value(&u.shift(theta)).unwrap();
            let rel = (shifted - base).abs() / (1.0 + base.abs());
            worst = worst.max(rel);
        }
    }
    assert!(worst <= 1e-8);
}

#[test]
fn gradient_matches_central_differences() {
    let (body, p) = ellipsoid();
    let action = DualAction::new(&body, p, 16, 128, Execution::Sequential).unwrap();
    let h = 1e-5;
    for s in 0..100u64 {
        let u = random_loop(s, 2, 16, 20.0);
        let v = random_loop(1000 + s, 2, 16, 1.0);
        let g = action.gradient(&u).unwrap();
        let mut up = u.clone();
        up.axpy(h, &v);
        let mut um = u.clone();
        um.axpy(-h, &v);
        let fd = (action.value(&up).unwrap() - action.value(&um).unwrap()) / (2.0 * h);
        let an = g.inner(&v);
        assert!(
            (fd - an).abs() <= 1e-6 * an.abs().max(g.norm() * v.norm()),
            "{fd} vs {an}"
        );
    }
}

#[test]
fn coercivity_lower_bound() {
    let (body, p) = ellipsoid();
    let action = DualAction::new(&body, p, 16, 128, Execution::Sequential).unwrap();
    let (c1, c) = action.coercivity();
    assert!(c1 > 0.0);
    for s in 0..20u64 {
        for size in [0.1, 1.0, 10.0, 100.0, 1e3] {
            let u = random_loop(s, 2, 16, size);
            let v = action.value(&u).unwrap();
            assert!(
                v >= c1 * size * size - c,
                "Ψ = {v} below {c1}·{size}² − {c}"
            );
        }
    }
}

/// Adaptive Simpson on `[a, b]`.
fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 40)
}

#[test]
fn single_mode_value_matches_adaptive_quadrature() {
    let (body, p) = ellipsoid();
    let action = DualAction::new(&body, p, 8, 64, Execution::Sequential).unwrap();
    for (z0, z1) in [
        (Complex64::new(0.0, 30.0), Complex64::new(0.0, 0.0)),
        (Complex64::new(10.0, 3.0), Complex64::new(-4.0, 12.0)),
        (Complex64::new(0.5, 0.2), Complex64::new(0.1, -0.3)),
    ] {
        let mut u = AntiperiodicLoop::zeros(2, 8).unwrap();
        u.set_coeff(1, 0, z0).unwrap();
        u.set_coeff(1, 1, z1).unwrap();
        // k = 1: Mu = −Ju/2π, so ½ Ju·Mu = −|u|²/4π, constant in t.
        let quad = -(z0.norm_sqr() + z1.norm_sqr()) / (4.0 * PI) * 0.5;
        let g = |t: f64| {
            let x = u.eval(t);
            // −Ju with J(x, y) = (−y, x)
            let w = [x[2], x[3], -x[0], -x[1]];
            fenchel_dual(&body, &p, &w).unwrap().0
        };
        let oracle = quad + simpson(&g, 0.0, 0.5, 1e-12);
        let v = action.value(&u).unwrap();
        assert!(
            (v - oracle).abs() <= 1e-8 * (1.0 + oracle.abs()),
            "{v} vs {oracle}"
        );
    }
}

#[test]
fn zero_loop_is_trivial() {
    let (body, p) = ellipsoid();
    let action = DualAction::new(&body, p, 8, 64, Execution::Sequential).unwrap();
    let u = AntiperiodicLoop::zeros(2, 8).unwrap();
    assert_eq!(action.value(&u).unwrap(), 0.0);
    assert_eq!(action.gradient(&u).unwrap().norm(), 0.0);
    assert!(matches!(
        DualAction::new(&body, p, 8, 31, Execution::Sequential),
        Err(Error::Resolution { .. })
    ));
}

#[test]
fn minimize_descends_to_a_negative_critical_value() {
    let (body, p) = ellipsoid();
    let action = DualAction::new(&body, p, 32, 256, Execution::Sequential).unwrap();
    let seed = plane_seed(&body, &p, 32, 0).unwrap();
    let cp = minimize(&action, &seed, &MinimizeOptions::default()).unwrap();
    assert!(cp.value < 0.0);
    assert!(cp.grad_norm <= 1e-9);
    for w in cp.trace.windows(2) {
        assert!(w[1] <= w[0] + 1e-13 * (1.0 + w[0].abs()));
    }
    let ch = recover_characteristic(&action, &cp, &RecoverOptions::default()).unwrap();
    assert!((ch.tau / (2.0 * PI) - 1.0).abs() < 1e-4);
    assert!(ch.symmetric);
    assert!(ch.gauge_error < 1e-6);
}

#[test]
fn tiny_seed_never_rises() {
    let (body, p) = ellipsoid();
    let action = DualAction::new(&body, p, 16, 128, Execution::Sequential).unwrap();
    for s in 0..4 {
        let seed = random_loop(s, 2, 16, 1e-8);
        let start = action.value(&seed).unwrap();
        match minimize(&action, &seed, &MinimizeOptions::default()) {
            Ok(cp) => assert!(cp.value < 0.0 && cp.value <= start),
            Err(e) => assert!(matches!(e, Error::TrivialLimit { .. }), "{e}"),
        }
    }
}

#[test]
fn ellipsoid_search_and_distinctness() {
    let (body, p) = ellipsoid();
    let opts = SearchOptions {
        modes: 32,
        quad_nodes: 256,
        random_seeds: 2,
        ..SearchOptions::default()
    };
    let out = find_characteristics(&body, &p, &opts).unwrap();
    let chars = &out.characteristics;
    assert_eq!(chars.len(), 2);
    for (c, r) in chars.iter().zip([1.0f64, 1.3]) {
        assert!((c.tau / (2.0 * PI * r * r) - 1.0).abs() < 1e-4);
        assert!(c.symmetric && c.symmetry_error <= 1e-6);
        assert!(c.psi_value < 0.0);
    }
    assert!(distinct(&chars[0], &chars[1], 1e-3));

    let c = &chars[0];
    let mut shifted = c.clone();
    shifted.samples.rotate_left(37);
    assert!(!distinct(c, &shifted, 1e-3));
    let mut negated = c.clone();
    negated
        .samples
        .iter_mut()
        .for_each(|y| y.iter_mut().for_each(|v| *v = -*v));
    assert!(!distinct(c, &negated, 1e-3));
}

use std::f64::consts::PI;

use lorentz_geometry::*;
use proptest::prelude::*;
use radial_core::quadrature::integrate;
use radial_core::{phi, psi, Adaptive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const E1: [f64; 3] = [1.0, 0.0, 0.0];

fn cap(s: f64, a: f64, b: f64, eps: f64) -> CapSpec {
    CapSpec::new(s, a, b, E1, eps).unwrap()
}

/// `sigma int_a^b r^2 / psi_s(r) dr`, in the chart `r = phi_s(u)` where the
/// integrand becomes `phi_s(u)`.
fn measure_by_quadrature(c: &CapSpec) -> f64 {
    let v = integrate(|u| phi(c.s, u), psi(c.s, c.a), psi(c.s, c.b), &Adaptive::rel(1e-14));
    4.0 * PI * (c.eps / 2.0).sin().powi(2) * v.value
}

#[test]
fn measure_examples() {
    assert!(cap_measure(&cap(1.0, 1.5, 1.5 + 1e-13, 0.7)).unwrap() < 1e-11);
    let (a, b) = (0.5, 3.0);
    let m = cap_measure(&cap(0.0, a, b, PI)).unwrap();
    assert!((m - 2.0 * PI * (b * b - a * a)).abs() < 1e-12 * m);
    assert!((m - measure_by_quadrature(&cap(0.0, a, b, PI))).abs() < 1e-11 * m);
    assert!(cap_measure(&cap(1.0, 1.0, f64::INFINITY, 0.5)).is_err());
}

proptest! {
    #[test]
    fn measure_matches_quadrature(s in 0.0f64..3.0, da in 0.0f64..2.0, w in 0.01f64..4.0, eps in 0.0f64..3.14) {
        let c = cap(s, s + da, s + da + w, eps);
        let exact = cap_measure(&c).unwrap();
        let quad = measure_by_quadrature(&c);
        prop_assert!((exact - quad).abs() <= 1e-10 * exact.max(1e-300), "{exact} vs {quad}");
    }

    #[test]
    fn measure_rescales_quadratically(s in 0.01f64..3.0, da in 0.0f64..2.0, w in 0.01f64..4.0, eps in 0.0f64..3.14,
                                      l in prop::sample::select(vec![0.5, 2.0, 7.0])) {
        let c = cap(s, s + da, s + da + w, eps);
        let m = cap_measure(&c).unwrap();
        let ml = cap_measure(&c.rescaled(l)).unwrap();
        prop_assert!((ml - l * l * m).abs() <= 1e-12 * ml.max(1e-300) * 4.0, "{ml} vs {}", l * l * m);
    }

    #[test]
    fn measure_is_additive_and_monotone(s in 0.0f64..3.0, da in 0.0f64..2.0, w1 in 0.01f64..3.0, w2 in 0.01f64..3.0,
                                        eps in 0.0f64..3.0, de in 0.0f64..0.14) {
        let (a, b, c) = (s + da, s + da + w1, s + da + w1 + w2);
        let whole = cap_measure(&cap(s, a, c, eps)).unwrap();
        let parts = cap_measure(&cap(s, a, b, eps)).unwrap() + cap_measure(&cap(s, b, c, eps)).unwrap();
        prop_assert!((whole - parts).abs() <= 1e-13 * whole.max(1e-300) * 8.0);
        prop_assert!(cap_measure(&cap(s, a, b, eps)).unwrap() <= whole);
        prop_assert!(cap_measure(&cap(s, a, c, eps + de)).unwrap() >= whole);
    }
}

#[test]
fn dyadic_measure_asymptote() {
    let d = dyadic_cap_asymptotics(1.0, 12, 0.3).unwrap();
    assert!((d.ratio.unwrap() - 1.0).abs() <= 1e-3, "{d:?}");
    let zero = dyadic_cap_asymptotics(1.0, 5, 0.0).unwrap();
    assert_eq!((zero.exact, zero.asymptote, zero.ratio), (0.0, 0.0, None));
    // ratio tends to 1 monotonically in k
    let errs: Vec<f64> = (0..20).map(|k| (dyadic_cap_asymptotics(0.7, k, 1.1).unwrap().ratio.unwrap() - 1.0).abs()).collect();
    assert!(errs.windows(2).all(|w| w[1] <= w[0]), "{errs:?}");
    assert!(errs[19] < 1e-9);
    for k in [10, 20, 30] {
        assert!((dyadic_log_term(k) - 2f64.ln()).abs() < 4f64.powi(-k + 1));
    }
    let cap = CapSpec::dyadic(0.3, 4, E1, 0.2).unwrap();
    assert_eq!(cap.dyadic_index(), Some(4));
    assert_eq!(self::cap(0.3, 0.3, 0.7, 0.2).dyadic_index(), None);
}

#[test]
fn normalization_picks_the_stated_boost() {
    let c = CapSpec::new(0.05, 1.0, 2.0, [0.2, -0.5, 0.8], PI / 6.0).unwrap();
    let n = normalize_cap(&c).unwrap();
    assert!((n.boost.t - (PI / 6.0).cos()).abs() < 1e-15);
    assert!(n.measure_pass && n.range_pass && n.pass, "{n:?}");
    assert!(n.image_measure >= PI / (1.0 + (PI / 6.0).cos()) * (1.0 - 1e-12));
    assert!(n.sheet_residual < 1e-12, "{n:?}");

    let wide = CapSpec::new(0.1, 1.0, 2.0, E1, 0.4 * PI).unwrap();
    let n = normalize_cap(&wide).unwrap();
    assert_eq!(n.boost.t, 0.0);
    assert!(n.pass, "{n:?}");
}

#[test]
fn normalization_certificates_hold_across_admissible_caps() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut checked = 0;
    while checked < 60 {
        let eps = PI / 2.0 * rng.random::<f64>();
        let s = 0.5 * rng.random::<f64>();
        let axis = [0, 1, 2].map(|_| 2.0 * rng.random::<f64>() - 1.0);
        let Ok(c) = CapSpec::new(s, 1.0, 2.0, axis, eps) else { continue };
        let Ok(n) = normalize_cap(&c) else { continue };
        assert!(n.pass, "{c:?}: {n:?}");
        checked += 1;
    }
}

#[test]
fn normalization_rejects_each_hypothesis() {
    let reject = |s: f64, a: f64, b: f64, eps: f64| normalize_cap(&cap(s, a, b, eps)).unwrap_err().failed;
    // s > 1/2 forces 8 s^2 > 2 > sin^2 eps
    assert_eq!(reject(0.6, 1.0, 2.0, 1.5), vec![Hypothesis::MassParameter, Hypothesis::Thinness]);
    assert_eq!(reject(0.1, 1.0, 2.0, 2.0), vec![Hypothesis::AngleRange]);
    assert_eq!(reject(0.4, 1.0, 2.0, 0.5), vec![Hypothesis::Thinness]);
    assert_eq!(reject(0.1, 1.0, 3.0, 1.0), vec![Hypothesis::RadialRange]);
    assert!(reject(0.0, 1.0, 2.0, 0.0).contains(&Hypothesis::NonDegenerate));
}

/// Image measure by importance sampling: draw points of `H^3_{s'}` with radii
/// in the certified range and test membership by pulling them back.
#[test]
fn normalized_image_measure_by_sampling() {
    let c = CapSpec::new(0.05, 1.0, 2.0, [0.0, 0.6, 0.8], PI / 6.0).unwrap();
    let n = normalize_cap(&c).unwrap();
    let (lo, hi) = NORMALIZED_RANGE;
    let sp = n.image_s;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let samples = 400_000;
    let (mut sum, mut sum2) = (0.0, 0.0);
    for _ in 0..samples {
        // uniform height on [psi(lo), psi(hi)], uniform direction; weight phi(u) * span * 4 pi
        let (u0, u1) = (psi(sp, lo), psi(sp, hi));
        let u = u0 + (u1 - u0) * rng.random::<f64>();
        let r = phi(sp, u);
        let z = 2.0 * rng.random::<f64>() - 1.0;
        let a = 2.0 * PI * rng.random::<f64>();
        let q = (1.0 - z * z).sqrt();
        let p = SpaceTimePoint::new([r * z, r * q * a.cos(), r * q * a.sin()], u);
        let back = boost(&n.boost, &p, true);
        let rb = back.spatial_norm();
        let cos_angle = (0..3).map(|i| back.x[i] * c.axis[i]).sum::<f64>() / rb;
        let inside = (1.0..=2.0).contains(&rb) && cos_angle >= c.eps.cos() && back.t > 0.0;
        let w = if inside { r * (u1 - u0) * 4.0 * PI } else { 0.0 };
        sum += w;
        sum2 += w * w;
    }
    let mean = sum / samples as f64;
    let se = ((sum2 / samples as f64 - mean * mean) / samples as f64).sqrt();
    assert!((mean - n.image_measure).abs() < 3.0 * se, "{mean} +- {se} vs {}", n.image_measure);
}

#[test]
fn ball_certificate_and_calibration() {
    for k in [0, 1, 3, 8, 15] {
        for eps in [0.0, 0.1, 0.7, PI / 2.0] {
            for s in [0.2, 1.0, 5.0] {
                let b = bounded_ball_certificate(s, k, eps).unwrap();
                assert!(b.pass, "s={s} k={k} eps={eps}: {b:?}");
                assert!(b.radius.is_finite() && b.radius > 0.0);
            }
        }
    }
    let (c, k, eps) = calibrate_ball_constant(24, 46);
    assert!(c <= BALL_CONSTANT * (1.0 + 1e-12) && c > 0.99 * BALL_CONSTANT, "{c} at k={k} eps={eps}");
    assert!(bounded_ball_certificate(1.0, 2, 1.8).is_err());
}

#[test]
fn ball_first_coordinate_stated_bound_fails_at_inner_radius() {
    // at r = s, eps = 0, k = 0 the boosted point has first coordinate exactly 2s
    let b = bounded_ball_certificate(1.0, 0, 0.0).unwrap();
    assert!((b.max_first - 2.0).abs() < 1e-12);
    assert!(b.max_first > b.first_bound_stated);
    assert!(b.max_first <= b.first_bound);
}

#[test]
fn ball_certificate_formula_matches_generic_boost() {
    let (s, k, eps) = (0.8, 2, 0.5);
    let b = bounded_ball_certificate(s, k, eps).unwrap();
    let bp = BoostParam::new(b.boost_t).unwrap();
    let mut radius: f64 = 0.0;
    for i in 0..257 {
        let r = s * 4.0 * (1.0 + i as f64 / 256.0);
        for j in 0..257 {
            let ph = eps * j as f64 / 256.0;
            let p = SpaceTimePoint::new([r * ph.cos(), r * ph.sin(), 0.0], psi(s, r));
            radius = radius.max(inverse_boost(&bp, &p, false).spatial_norm());
        }
    }
    assert!((radius - b.radius).abs() < 1e-9 * b.radius, "{radius} vs {}", b.radius);
}

use proptest::prelude::*;
use radial_core::slice::{cross_conv_point, measure_self_conv, self_conv_point};
use radial_core::*;

fn opts() -> Adaptive {
    Adaptive::rel(1e-10).with_abs(1e-300)
}

prop_compose! {
    fn profile(s: f64)(r0 in 0.0..2.0f64, len in 0.5..4.0f64, vals in prop::collection::vec(-1.0..2.0f64, 3..12)) -> RadialProfile {
        let n = vals.len();
        let radii = (0..n).map(|i| s + r0 + len * i as f64 / (n - 1) as f64).collect();
        RadialProfile::new(s, radii, vals).unwrap()
    }
}

fn pair() -> impl Strategy<Value = (RadialProfile, RadialProfile)> {
    (0.2..2.0f64).prop_flat_map(|s| (profile(s), profile(s)))
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn height_round_trip(s in 0.0..10.0f64, dr in 0.0..100.0f64) {
        let r = s + dr;
        prop_assert!((phi(s, psi(s, r)) - r).abs() <= 4.0 * f64::EPSILON * r.max(s));
    }

    #[test]
    fn commutative((f, g) in pair(), rho in 0.0..8.0f64, tau in 0.0..9.0f64) {
        let a = self_conv_point(&f, &g, rho, tau, &opts()).unwrap().value;
        let b = self_conv_point(&g, &f, rho, tau, &opts()).unwrap().value;
        prop_assert!(close(a, b, 1e-9), "{} vs {}", a, b);
    }

    #[test]
    fn bilinear((f, g) in pair(), k in -3.0..3.0f64, rho in 0.1..8.0f64, tau in 0.0..9.0f64) {
        let a = self_conv_point(&f.scaled(k), &g, rho, tau, &opts()).unwrap().value;
        let b = self_conv_point(&f, &g, rho, tau, &opts()).unwrap().value;
        prop_assert!(close(a, k * b, 1e-9), "{} vs {}", a, k * b);
    }

    #[test]
    fn exact_support((f, g) in pair(), rho in 0.0..8.0f64, tau in -3.0..9.0f64) {
        let s = f.s();
        let h = self_conv_point(&f, &g, rho, tau, &opts()).unwrap().value;
        if tau <= 0.0 || rho >= phi(s, tau) + s {
            prop_assert_eq!(h, 0.0);
        }
    }

    #[test]
    fn pointwise_cauchy_schwarz((f, _g) in pair(), rho in 0.0..8.0f64, tau in 0.0..9.0f64) {
        let s = f.s();
        let sq = f.map(|v| v * v);
        let lhs = self_conv_point(&f, &f, rho, tau, &opts()).unwrap().value.powi(2);
        let rhs = self_conv_point(&sq, &sq, rho, tau, &opts()).unwrap().value * measure_self_conv(s, rho, tau);
        prop_assert!(lhs <= rhs * (1.0 + 1e-9) + 1e-300, "{} > {}", lhs, rhs);
    }

    #[test]
    fn cross_reflection((f, g) in pair(), rho in 0.05..8.0f64, tau in -6.0..6.0f64) {
        let a = cross_conv_point(&f, &g, rho, tau, &opts()).unwrap().value;
        let b = cross_conv_point(&g, &f, rho, -tau, &opts()).unwrap().value;
        prop_assert!(close(a, b, 1e-12));
    }

    #[test]
    fn sliced_norm_symmetric_and_dilation_invariant((f, g) in pair(), l in prop::sample::select(vec![0.5, 2.0, 3.0])) {
        let res = SliceResolution::for_profiles(&f, &g, 1.0);
        let a = sliced_norm_sq(&f, &g, &res).unwrap();
        let b = sliced_norm_sq(&g, &f, &res).unwrap();
        prop_assert!(close(a, b, 1e-12));
        let (fl, gl) = (f.dilate(l), g.dilate(l));
        let resl = SliceResolution::for_profiles(&fl, &gl, 1.0);
        let c = sliced_norm_sq(&fl, &gl, &resl).unwrap();
        prop_assert!(close(a, c, 1e-10), "{} vs {}", a, c);
    }
}

#[test]
fn grid_cauchy_schwarz_and_support() {
    let quad = QuadratureSpec::default();
    let f = RadialProfile::height_uniform(1.0, 1.0, 4.0, 15, |r| (3.0 * r).cos()).unwrap();
    let sq = f.map(|v| v * v);
    let grid = FieldGrid::uniform((0.0, 10.0, 41), (0.0, 8.0, 33));
    let h = hyperbolic_conv(&f, &f, &grid, &quad).unwrap();
    let h2 = hyperbolic_conv(&sq, &sq, &grid, &quad).unwrap();
    assert!(h.converged() && h2.converged());
    for (j, &t) in grid.tau.iter().enumerate() {
        for (i, &r) in grid.rho.iter().enumerate() {
            let v = h.field.get(i, j);
            assert!(v * v <= h2.field.get(i, j) * measure_self_conv(1.0, r, t) * (1.0 + 1e-9) + 1e-300);
            if r >= phi(1.0, t) + 1.0 {
                assert_eq!(v, 0.0);
            }
        }
    }
}

#[test]
fn zero_factor_gives_zero_field() {
    let f = RadialProfile::indicator(1.0, 1.0, 3.0, 9).unwrap();
    let grid = FieldGrid::uniform((0.0, 6.0, 13), (0.0, 6.0, 13));
    let h = hyperbolic_conv(&f, &f.scaled(0.0), &grid, &QuadratureSpec::default()).unwrap();
    assert_eq!(h.field.max_abs(), 0.0);
}

#[test]
fn cross_field_symmetric_for_equal_sheets() {
    let f = RadialProfile::height_uniform(1.0, 1.0, 3.0, 9, |r| 1.0 / r).unwrap();
    let grid = FieldGrid::uniform((0.1, 6.0, 12), (-4.0, 4.0, 17));
    let h = cross_conv(&f, &f, &grid, &QuadratureSpec::default()).unwrap().field;
    for j in 0..17 {
        for i in 0..12 {
            assert!((h.get(i, j) - h.get(i, 16 - j)).abs() <= 1e-12 * h.get(i, j).abs().max(1e-300));
        }
    }
}

#[test]
fn field_norm_converges_under_refinement() {
    let f = RadialProfile::indicator(1.0, 1.0, 2.0, 9).unwrap();
    let quad = QuadratureSpec::default();
    let norm = |n: usize| {
        let grid = FieldGrid::uniform((0.0, 5.0, n), (0.0, 4.0, n));
        l2_field_norm(&hyperbolic_conv(&f, &f, &grid, &quad).unwrap().field)
    };
    let (a, b) = (norm(161), norm(321));
    assert!(!a.touches_boundary && !b.touches_boundary);
    assert!((a.value - b.value).abs() < 0.01 * b.value, "{a:?} vs {b:?}");
    let res = SliceResolution::for_profiles(&f, &f, 8.0);
    let sliced = sliced_norm_sq(&f, &f, &res).unwrap().sqrt();
    assert!((b.value - sliced).abs() < 0.01 * sliced, "{} vs {sliced}", b.value);
}

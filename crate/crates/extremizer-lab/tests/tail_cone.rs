use std::f64::consts::PI;

use extremizer_lab::tail::{supported_beyond, tail_constant};
use extremizer_lab::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use radial_core::profile::height_uniform_radii;
use radial_core::RadialProfile;

#[test]
fn shell_at_ten_obeys_the_tail_bound() {
    let f = RadialProfile::indicator(1.0, 10.0, 12.0, 40).unwrap();
    let c = tail_bound_check(10.0, &f).unwrap();
    assert!(c.lhs / c.norm_sq.powi(2) <= 2.0 * PI * (1.0 + 1.0 / 99f64.sqrt()));
    assert!(c.holds() && c.slack() > 0.0);
    let (cs, ok) = cauchy_schwarz_integral(&f, 1e-6);
    assert!(ok);
    assert!(c.lhs <= cs && cs <= c.bound, "{} {} {}", c.lhs, cs, c.bound);
}

#[test]
fn random_tails_obey_the_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let a = rng.random_range(1.2..20.0);
        let b = a * rng.random_range(1.1..4.0);
        let radii = height_uniform_radii(1.0, a, b, 24).unwrap();
        let v: Vec<f64> = radii.iter().map(|_| rng.random_range(0.0..1.0)).collect();
        let f = RadialProfile::new(1.0, radii, v).unwrap();
        let c = tail_bound_check(a, &f).unwrap();
        assert!(c.holds(), "a = {a}: {c:?}");
    }
}

#[test]
fn bound_blows_up_near_the_sheet_edge() {
    assert!(tail_constant(1.0, 1.0).is_infinite());
    assert!(tail_constant(1.0, 1.0001) > tail_constant(1.0, 1.1));
    assert!((tail_constant(1.0, 1e8) - 2.0 * PI).abs() < 1e-6);
    let f = RadialProfile::indicator(1.0, 1.0, 2.0, 10).unwrap();
    assert!(tail_bound_check(1.0, &f).is_err());
    assert!(tail_bound_check(1.5, &f).is_err());
    assert!(!supported_beyond(&f, 1.5) && supported_beyond(&f, 1.0));
    let g = RadialProfile::indicator(1.0, 1.001, 2.0, 20).unwrap();
    let c = tail_bound_check(1.001, &g).unwrap();
    assert!(c.holds() && c.bound.is_finite());
}

#[test]
fn cone_distances_shrink_to_zero() {
    let f = RadialProfile::indicator(1.0, 1.0, 2.0, 2).unwrap();
    let c = cone_limit_scan(&f, &[0.5, 0.25, 0.1, 0.05, 0.0], 1e-6).unwrap();
    assert!(c.strictly_decreasing());
    assert!(c.dominated());
    assert!(c.distances.iter().all(|d| d.converged));
    assert_eq!(c.distances[4].distance, 0.0);
    assert!(c.distances[3].distance < 0.1 * c.distances[0].distance);
    assert!((c.dominating_bound - 8.0 * PI).abs() < 1e-12);
}

#[test]
fn cone_scan_arguments_are_checked() {
    let f = RadialProfile::indicator(1.0, 1.0, 2.0, 2).unwrap();
    assert!(cone_limit_scan(&f, &[0.25, 0.5], 1e-6).is_err());
    assert!(cone_limit_scan(&f, &[1.0, 0.5], 1e-6).is_err());
    let g = RadialProfile::indicator(0.0, 0.0, 2.0, 4).unwrap();
    assert!(cone_limit_scan(&g, &[0.0], 1e-6).is_err());
}

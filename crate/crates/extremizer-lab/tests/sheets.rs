use std::f64::consts::PI;

use extremizer_lab::sheets::resolution;
use extremizer_lab::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use radial_core::profile::height_uniform_radii;
use radial_core::RadialProfile;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn even_pairs_have_equal_cross_and_self_terms() {
    for f in [RadialProfile::trial(1.0, 0.4, 15.0, 80).unwrap(), RadialProfile::indicator(1.0, 2.0, 5.0, 30).unwrap()] {
        let t = full_terms(&SheetPair::even(f.clone()), &resolution(&f, 2.0));
        assert_eq!(t.aa, t.bb);
        assert_eq!(t.ac, t.cb);
        assert!(rel(t.cc, t.aa) < 1e-3, "{t:?}");
        // ||C|| = ||A|| holds exactly only before discretization
        assert!(t.total() >= 6.0 * t.aa * (1.0 - 1e-4), "{t:?}");
    }
}

#[test]
fn lower_sheet_zero_reduces_to_one_sheet() {
    let f = RadialProfile::trial(1.0, 0.3, 20.0, 100).unwrap();
    let full = full_q_ratio(&SheetPair::upper_only(f.clone())).unwrap();
    assert_eq!((full.terms.bb, full.terms.cc, full.terms.ac, full.terms.cb), (0.0, 0.0, 0.0, 0.0));
    let q = q_ratio(&f).unwrap();
    assert!(rel(full.value, q.value) < 1e-9, "{} vs {}", full.value, q.value);
    let flipped = full_q_ratio(&SheetPair::upper_only(f).reflected()).unwrap();
    assert!(rel(flipped.value, full.value) < 1e-12);
}

#[test]
fn even_small_rate_trial_beats_the_double_cone() {
    let f = RadialProfile::trial(1.0, 0.1, 100.0, 150).unwrap();
    let full = full_q_ratio(&SheetPair::even(f.clone())).unwrap();
    let t = full.terms;
    // norm of the even pair is twice that of f, so 6 ||A||^2 / (2 ||f||^2)^2 is (3/2) Q(f)
    assert!(full.numerator >= 6.0 * t.aa);
    assert!(t.ac > 0.0 && t.cc > 0.0);
    assert!(full.value > 3.0 * PI, "{full:?}");
    let q = q_ratio(&f).unwrap().value;
    assert!(full.value >= 1.5 * q * (1.0 - 1e-3));
}

#[test]
fn symmetrization_keeps_the_norm_and_is_even() {
    let radii = height_uniform_radii(1.0, 1.0, 5.0, 20).unwrap();
    let p = RadialProfile::from_fn(1.0, radii.clone(), |r| Complex64::new(r.sin(), r.cos())).unwrap();
    let m = RadialProfile::from_fn(1.0, radii, |r| Complex64::new((-r).exp(), 0.3)).unwrap();
    let f = SheetPair::new(p, m).unwrap();
    let g = symmetrize(&f);
    assert!(g.is_even());
    assert!(g.plus.is_nonnegative());
    assert!(rel(g.norm_sq(), f.norm_sq()) < 1e-12);
}

#[test]
fn symmetrizing_an_even_function_changes_nothing() {
    let f = SheetPair::even(RadialProfile::trial(1.0, 0.3, 10.0, 40).unwrap());
    let g = symmetrize(&f);
    for (a, b) in g.plus.values().iter().zip(f.plus.values()) {
        assert!((a - b).abs() <= 1e-15 * b);
    }
    assert_eq!(g.plus.values(), g.minus.values());
}

#[test]
fn symmetrization_inequality_on_random_complex_pairs() {
    let radii = height_uniform_radii(1.0, 1.0, 4.0, 12).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = f64::INFINITY;
    for _ in 0..100 {
        let mut draw = || {
            let v: Vec<Complex64> =
                radii.iter().map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
            RadialProfile::new(1.0, radii.clone(), v).unwrap()
        };
        let f = SheetPair::new(draw(), draw()).unwrap();
        let g = symmetrize(&f);
        let res = resolution(&f.plus, 1.0);
        let lhs = full_terms(&f, &res).total();
        let rhs = full_terms(&g, &res).total();
        worst = worst.min((rhs - lhs) / rhs);
    }
    assert!(worst >= -1e-12, "worst relative slack {worst}");
}

#[test]
fn mismatched_sheets_are_rejected() {
    let a = RadialProfile::indicator(1.0, 1.0, 3.0, 10).unwrap();
    let b = RadialProfile::indicator(2.0, 2.0, 3.0, 10).unwrap();
    let c = RadialProfile::indicator(1.0, 1.0, 3.0, 11).unwrap();
    assert!(SheetPair::new(a.clone(), b).is_err());
    assert!(SheetPair::new(a, c).is_err());
}

use std::f64::consts::PI;

use closed_forms::*;
use proptest::prelude::*;

fn pt(s: f64, rho: f64, tau: f64) -> ConvPoint {
    ConvPoint::new(s, rho, tau).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

proptest! {
    #[test]
    fn scaling_identity(s in 0.05f64..20.0, rho in 0.0f64..6.0, tau in -1.0f64..6.0) {
        let unit = mu_self_conv(&pt(1.0, rho, tau));
        let scaled = mu_self_conv(&pt(s, s * rho, s * tau));
        prop_assert!((unit - scaled).abs() <= 1e-12 * unit.abs().max(1.0), "{unit} vs {scaled}");
    }

    #[test]
    fn regime_forms_agree(s in 0.05f64..5.0, x in 0.0f64..1.2, tau in -0.5f64..20.0) {
        let top = pt(s, 0.0, tau.max(0.0)).self_boundaries()[2];
        let p = pt(s, x * top, tau);
        let a = mu_self_conv(&p);
        let b = mu_self_conv_alt(&p);
        prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0), "{p:?}: {a} vs {b}");
    }

    #[test]
    fn branches_meet_continuously(s in 0.05f64..5.0, tau in 1e-3f64..30.0) {
        let [b1, b2, _] = pt(s, 0.0, tau).self_boundaries();
        let at = |rho| pt(s, rho, tau);
        if b1 > 0.0 {
            let (l, r) = (self_branch_formula(Branch::Inner, &at(b1)), self_branch_formula(Branch::Middle, &at(b1)));
            prop_assert!(rel(l, r) < 1e-9, "inner/middle at {b1}: {l} vs {r}");
        }
        let (l, r) = (self_branch_formula(Branch::Middle, &at(b2)), self_branch_formula(Branch::Outer, &at(b2)));
        prop_assert!(rel(l, r) < 1e-9, "middle/outer at {b2}: {l} vs {r}");
        // the density itself across the inner boundary, where it is Lipschitz
        let d = 1e-12 * b1.max(1e-300);
        if b1 > 1e-6 {
            let (l, r) = (mu_self_conv(&at(b1 - d)), mu_self_conv(&at(b1 + d)));
            prop_assert!(rel(l, r) < 1e-9, "across {b1}: {l} vs {r}");
        }
    }

    #[test]
    fn scan_stays_in_bracket(s in 0.05f64..5.0, tau in 1e-2f64..50.0) {
        let (lo, hi) = mu_self_conv_sup(s, tau).unwrap();
        let top = pt(s, 0.0, tau).self_boundaries()[2];
        let (_, sup) = sup_scan(|r| mu_self_conv(&pt(s, r, tau)), top, 2001);
        prop_assert!(sup >= lo * (1.0 - 1e-12) && sup <= hi * (1.0 + 1e-12), "{lo} <= {sup} <= {hi}");
        let exact = self_conv_sup_exact(s, tau).unwrap();
        prop_assert!(sup <= exact * (1.0 + 1e-12) && exact <= hi * (1.0 + 1e-12));
    }

    #[test]
    fn weight_preserves_support(a in 0.0f64..5.0, rho in 0.0f64..8.0, tau in -1.0f64..6.0) {
        let p = pt(1.0, rho, tau);
        let w = exp_weighted_conv(a, &p).unwrap();
        prop_assert_eq!(w == 0.0, mu_self_conv(&p) == 0.0);
    }
}

#[test]
fn sup_bracket_examples() {
    let (lo, hi) = mu_self_conv_sup(1.0, 1e6).unwrap();
    assert!(rel(lo, 2.0 * PI) < 1e-5 && rel(hi, 2.0 * PI) < 1e-5);
    let top = pt(1.0, 0.0, 2.0).self_boundaries()[2];
    let (_, sup) = sup_scan(|r| mu_self_conv(&pt(1.0, r, 2.0)), top, 4001);
    assert!(sup >= 2.0 * PI * 2f64.sqrt() && sup <= 4.0 * PI, "{sup}");
    assert!(mu_self_conv_sup(1.0, 0.0).is_err());
    assert!(mu_self_conv_sup(1.0, -2.0).is_err());
    // sup at (s, tau) is sup at (1, tau / s)
    for (s, tau) in [(0.5, 1.0), (3.0, 2.0), (2.0, 9.0)] {
        let a = self_conv_sup_exact(s, tau).unwrap();
        let b = self_conv_sup_exact(1.0, tau / s).unwrap();
        assert!(rel(a, b) < 1e-13);
    }
}

#[test]
fn weight_zero_is_identity() {
    for (rho, tau) in [(0.0, 1.0), (1.3, 2.7), (3.0, 1.5)] {
        let p = pt(1.0, rho, tau);
        assert_eq!(exp_weighted_conv(0.0, &p).unwrap(), mu_self_conv(&p));
    }
}

#[test]
fn cone_sup_formula_matches_scan() {
    for s in [0.5, 1.0, 2.0] {
        for k in 1..=60 {
            let tau = s * 0.05 * k as f64;
            if (tau - s).abs() < 1e-9 * s {
                continue;
            }
            let formula = mu_cone_conv_sup(s, tau).unwrap();
            let (_, scan) = sup_scan(|r| mu_cone_conv(&pt(s, r, tau)), tau + s, 200_001);
            assert!(rel(scan, formula) < 1e-4, "s={s} tau={tau}: scan {scan} vs {formula}");
        }
    }
}

#[test]
fn cone_global_sup_is_four_pi_near_tau_equal_s() {
    let s = 1.0;
    let mut best = (0.0, 0.0);
    for j in 0..=4000 {
        let tau = 3.0 * s * j as f64 / 4000.0;
        for i in 0..=400 {
            let rho = (tau + s) * i as f64 / 400.0;
            let v = mu_cone_conv(&pt(s, rho, tau));
            if v > best.0 {
                best = (v, tau);
            }
        }
    }
    assert!(best.0 <= 4.0 * PI * (1.0 + 1e-12));
    assert!(rel(best.0, 4.0 * PI) < 2e-3, "{best:?}");
    assert!((best.1 - s).abs() < 2e-3, "{best:?}");
}

#[test]
fn cone_sup_continuous_at_knee_and_jumps_at_s() {
    let s = 1.3;
    let b = s * CONE_SUP_KNEE;
    let l = mu_cone_conv_sup(s, b * (1.0 - 1e-12)).unwrap();
    let r = mu_cone_conv_sup(s, b * (1.0 + 1e-12)).unwrap();
    assert!(rel(l, r) < 1e-9, "{b}: {l} vs {r}");
    assert!(rel(mu_cone_conv_sup(s, s).unwrap(), 4.0 * PI) < 1e-14);
    let below = mu_cone_conv_sup(s, s * (1.0 - 1e-12)).unwrap();
    assert!(rel(below, 2.0 * PI) < 1e-5, "{below}");
}

use comparison::asymptotics::{check_identity, default_rates, laplace_at_scale, IDENTITIES};
use comparison::*;

#[test]
fn all_identities_hold_with_their_orders() {
    let reports = asymptotic_integral_suite(&default_rates()).unwrap();
    assert_eq!(reports.len(), 9);
    for r in &reports {
        assert!(r.pass, "{}: c0 = {}, residual = {}", r.label, r.c0, r.residual);
    }
    let limit = reports.iter().find(|r| r.identity == Identity::LogLimit).unwrap();
    let last = limit.samples.last().unwrap();
    assert!((last.1 + 1.0).abs() <= 1e-2, "{last:?}");
}

/// A remainder that is off by a logarithm must be caught.
#[test]
fn wrong_orders_fail() {
    let rates = default_rates();
    let root = check_identity(Identity::Root, &rates);
    // rescale the remainder by an extra 1/log a
    let bad: Vec<(f64, f64, f64)> = root.samples.iter().map(|&(a, l, s)| (a, l, s * a.ln().abs())).collect();
    let refit = {
        use nalgebra::{DMatrix, DVector};
        let m = DMatrix::from_fn(bad.len(), 3, |i, j| [1.0, 1.0 / bad[i].0.ln(), bad[i].0.cbrt()][j]);
        let y = DVector::from_iterator(bad.len(), bad.iter().map(|s| s.2));
        let c = m.clone().svd(true, true).solve(&y, 1e-14).unwrap();
        (&m * &c - &y).norm() / (bad.len() as f64).sqrt() / y.amax()
    };
    assert!(refit > asymptotics::FIT_TOL, "{refit}");
}

#[test]
fn integration_by_parts_identity() {
    let (l, r) = log_identity_sides(0.1);
    assert!((l - r).abs() <= 1e-9 * l.abs(), "{l} vs {r}");
    for a in [1e-9, 1e-3, 0.5] {
        let (l, r) = log_identity_sides(a);
        assert!((l - r).abs() <= 1e-9 * l.abs(), "a = {a}: {l} vs {r}");
    }
}

#[test]
fn closed_integral_is_one() {
    assert!((closed_integral() - 1.0).abs() < 1e-12);
}

#[test]
fn laplace_at_scale_matches_gamma_moments() {
    for b in [1e-4, 0.3] {
        for (k, fact) in [(0, 1.0), (1, 1.0), (2, 2.0), (3, 6.0)] {
            let v = laplace_at_scale(|u| u.powi(k), b);
            assert!((v - fact).abs() < 1e-13, "k = {k}: {v}");
        }
    }
}

#[test]
fn suite_rejects_bad_rates() {
    assert!(asymptotic_integral_suite(&[0.1, 0.2]).is_err());
    assert!(asymptotic_integral_suite(&[1e-3, 1e-4, 1e-5, 2.0]).is_err());
    assert_eq!(IDENTITIES.len(), 9);
}

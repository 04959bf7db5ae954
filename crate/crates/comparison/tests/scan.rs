use std::f64::consts::PI;

use comparison::*;

#[test]
fn scan_rows_and_csv() {
    let scan = ratio_scan(0.005, 0.25, 50, &Method::Panels).unwrap();
    assert_eq!(scan.samples.len(), 50);
    assert!((scan.samples[0].a - 0.005).abs() < 1e-15 && (scan.samples[49].a - 0.25).abs() < 1e-15);
    for w in scan.samples.windows(2) {
        assert!((w[1].ratio - w[0].ratio).abs() < 0.05 * w[0].ratio);
    }
    let mut buf = Vec::new();
    scan.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("a,I,II,ratio"));
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(row, vec![scan.samples[0].a, scan.samples[0].i, scan.samples[0].ii, scan.samples[0].ratio]);
    assert_eq!(text.lines().count(), 51);
}

/// The ratio rises above `2 pi` from the left, peaks, and falls back through
/// it just below `a = 0.2386`; the last three points of the 50-point scan on
/// `[0.005, 0.25]` lie below.
#[test]
fn ratio_crosses_two_pi_inside_the_scan() {
    let scan = ratio_scan(0.005, 0.25, 50, &Method::Panels).unwrap();
    assert!(!scan.pass());
    assert_eq!(scan.below.len(), 3);
    assert!(scan.below.iter().all(|&a| a > 0.2385));
    assert!(scan.samples.iter().filter(|s| s.a < 0.238).all(|s| s.ratio > 2.0 * PI));
    assert!((scan.a_at_min - 0.25).abs() < 1e-12);

    // bisect the crossing with both rules
    for method in [Method::Panels, Method::Adaptive { rel_tol: 1e-13 }] {
        let f = |a: f64| ratio(a, &method).unwrap().value - 2.0 * PI;
        let (mut lo, mut hi) = (0.2, 0.25);
        assert!(f(lo) > 0.0 && f(hi) < 0.0);
        for _ in 0..50 {
            let m = 0.5 * (lo + hi);
            if f(m) > 0.0 {
                lo = m
            } else {
                hi = m
            }
        }
        assert!((lo - 0.2385457).abs() < 1e-6, "{lo}");
    }
}

#[test]
fn ratio_stays_above_two_pi_for_small_rates() {
    let scan = ratio_scan(1e-3, 0.235, 120, &Method::Panels).unwrap();
    assert!(scan.pass(), "{:?}", scan.below);
    let first = scan.samples[0];
    assert!((first.ratio - 2.0 * PI).abs() <= 0.02 * 2.0 * PI);
    assert!((first.n() / (32.0 * PI.powi(3)) - 1.0).abs() < 1e-3);
    assert!((first.d() / (16.0 * PI * PI) - 1.0).abs() < 1e-3);
}

#[test]
fn scan_rejects_bad_ranges() {
    assert!(ratio_scan(0.0, 0.25, 50, &Method::Panels).is_err());
    assert!(ratio_scan(0.3, 0.25, 50, &Method::Panels).is_err());
    assert!(ratio_scan(0.1, 0.25, 1, &Method::Panels).is_err());
}

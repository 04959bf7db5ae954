use std::f64::consts::PI;

use extremizer_lab::*;

fn small(seed: u64) -> SearchConfig {
    SearchConfig { grid_size: 64, r_max: 20.0, restarts: 3, iters: 200, seed, ..Default::default() }
}

#[test]
fn search_beats_the_trial_family_and_the_cone() {
    let cfg = small(1);
    let r = maximize_radial(&cfg).unwrap();
    let scan = trial_scan(&cfg).unwrap();
    let best = scan.iter().map(|x| x.1).fold(f64::MIN, f64::max);
    assert_eq!(r.trial_best.1, best);
    assert!(r.q_star >= best - 1e-4);
    assert!(r.q_star > 2.0 * PI);
    assert!(r.f_star.is_nonnegative());
    let q = q_ratio(&r.f_star).unwrap();
    assert!((q.value - r.q_star).abs() < 1e-9 * r.q_star);
    assert_eq!(r.restarts[0].start, Start::Trial);
    assert_eq!(r.restarts[1].start, Start::Shell);
    assert_eq!(r.restarts[2].start, Start::LogNormal);
}

#[test]
fn trace_is_monotone_within_each_restart() {
    let r = maximize_radial(&small(2)).unwrap();
    for w in r.trace.windows(2) {
        if w[0].restart == w[1].restart {
            assert_eq!(w[1].iter, w[0].iter + 1);
            assert!(w[1].q >= w[0].q);
        }
    }
    for (i, rep) in r.restarts.iter().enumerate() {
        let last = r.trace.iter().filter(|t| t.restart == i).last().unwrap();
        assert_eq!(last.q, rep.q_final);
        assert_eq!(last.iter, rep.iterations);
        assert!(rep.q_final >= rep.q_initial);
    }
}

#[test]
fn seeds_agree_and_runs_repeat() {
    let values: Vec<f64> = (1..=3).map(|seed| maximize_radial(&small(seed)).unwrap().q_star).collect();
    let (lo, hi) = values.iter().fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
    assert!((hi - lo) / hi < 1e-3, "{values:?}");
    let again = maximize_radial(&small(2)).unwrap().q_star;
    assert_eq!(again, values[1]);
}

#[test]
fn bad_configurations_are_rejected() {
    for cfg in [
        SearchConfig { grid_size: 63, ..small(1) },
        SearchConfig { restarts: 0, ..small(1) },
        SearchConfig { r_max: 0.5, ..small(1) },
        SearchConfig { trial_rates: vec![], ..small(1) },
    ] {
        assert!(matches!(maximize_radial(&cfg), Err(ExtremizerError::Domain(_))));
    }
}

#[test]
fn stagnation_and_iteration_cap_are_reported() {
    let cfg = SearchConfig { restarts: 2, iters: 5, ..small(1) };
    let r = maximize_radial(&cfg).unwrap();
    assert!(r.restarts.iter().any(|x| x.stop == Stop::IterationCap));
    assert!(r.restarts.iter().all(|x| x.iterations <= 5));
}

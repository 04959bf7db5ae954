use std::f64::consts::PI;

use extremizer_lab::{
    bilinear_dyadic_scan, cauchy_schwarz_integral, cone_limit_scan, full_q_ratio, maximize_radial, refinement_corpus,
    tail_bound_check, SearchConfig, SheetPair, ShellKind,
};
use radial_core::profile::height_uniform_radii;
use radial_core::RadialProfile;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::csv;
use crate::cli::{BilinearArgs, ConelimitArgs, ExtremizeArgs, RefineArgs, ShellArg, TailboundArgs};
use crate::settings::Profile;
use crate::{Check, CliError, Report, ResultEnvelope};

/// Outer tolerance of the nested quadratures; the innermost level runs at the
/// profile tolerance.
fn nested_tol(profile: Profile) -> f64 {
    profile.rel_tol() * 1e2
}

pub fn extremize(args: &ExtremizeArgs) -> Result<Report, CliError> {
    let cfg = SearchConfig {
        s: args.s,
        grid_size: args.grid,
        r_max: args.rmax,
        restarts: args.restarts,
        iters: args.iters,
        seed: args.seed,
        ..SearchConfig::default()
    };
    let res = maximize_radial(&cfg)?;
    let finals: Vec<f64> = res.restarts.iter().map(|r| r.q_final).collect();
    let (lo, hi) = finals.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &q| (l.min(q), h.max(q)));
    let spread = (hi - lo) / hi;
    let mut checks = vec![
        Check::above("q_star_over_cone", res.q_star, 2.0 * PI),
        Check::at_least("q_star_over_trial", res.q_star, res.trial_best.1 - 1e-4),
        Check::at_most("restart_spread", spread, 1e-3),
    ];
    let mut values = json!({
        "q_star": res.q_star,
        "trial_best": { "a": res.trial_best.0, "q": res.trial_best.1 },
        "restarts": res.restarts,
        "restart_spread": spread,
        "trace_path": "extremize.trace.csv",
        "profile_path": "extremize.profile.csv",
    });
    if args.full {
        let full = full_q_ratio(&SheetPair::even(res.f_star.clone()))?;
        let t = full.terms;
        checks.extend([
            Check::relative("even_aa_bb", t.bb, t.aa, 1e-12),
            Check::at_least("cc_over_aa", t.cc, t.aa * (1.0 - 1e-4)),
            Check::at_least("ac", t.ac, 0.0),
            Check::at_least("cb", t.cb, 0.0),
            Check::at_least("total_over_6aa", t.total(), 6.0 * t.aa * (1.0 - 1e-4)),
            Check::above("full_q_over_3pi", full.value, 3.0 * PI),
        ]);
        values["full"] = json!(full);
    }
    let trace = csv(
        &["restart", "iter", "q", "step"],
        res.trace.iter().map(|e| vec![e.restart as f64, e.iter as f64, e.q, e.step]),
    );
    let profile = csv(&["r", "f"], res.f_star.radii().iter().zip(res.f_star.values()).map(|(&r, &v)| vec![r, v]));
    let env = ResultEnvelope::new("extremize", json!(args), values, checks, vec![]);
    Ok(Report::new(env).file("extremize.trace.csv", trace).file("extremize.profile.csv", profile).seed(args.seed))
}

pub fn bilinear(args: &BilinearArgs) -> Result<Report, CliError> {
    let kind = match args.kind {
        ShellArg::Bump => ShellKind::Bump,
        ShellArg::Indicator => ShellKind::Indicator,
    };
    let t = bilinear_dyadic_scan(args.s, args.kmax, kind, args.nodes)?;
    let rows = t
        .norms
        .iter()
        .enumerate()
        .flat_map(|(k, row)| row.iter().enumerate().map(move |(l, &n)| vec![k as f64, l as f64, n]));
    let table = csv(&["k", "k_prime", "norm"], rows);
    let env = ResultEnvelope::new(
        "bilinear",
        json!(args),
        json!({
            "slope": t.slope,
            "intercept": t.intercept,
            "constant": t.constant(),
            "resolution_error": t.resolution_error,
            "refined": t.refined,
            "table_path": "bilinear.csv",
        }),
        vec![Check::at_most("slope", t.slope, -0.20), Check::holds("symmetric", t.is_symmetric())],
        vec![],
    );
    Ok(Report::new(env).file("bilinear.csv", table))
}

pub fn refine(args: &RefineArgs) -> Result<Report, CliError> {
    let st = refinement_corpus(args.corpus, args.shells, args.nodes, args.seed)?;
    let finite = st.max_constant3.is_finite() && st.max_constant_sup.is_finite() && st.max_constant3_refined.is_finite();
    let env = ResultEnvelope::new(
        "refine",
        json!(args),
        json!(st),
        vec![
            Check::holds("finite_constants", finite),
            Check::relative("grid_stability", st.max_constant3_refined, st.max_constant3, 0.05),
        ],
        vec![],
    );
    Ok(Report::new(env).seed(args.seed))
}

pub fn tailbound(args: &TailboundArgs, profile: Profile) -> Result<Report, CliError> {
    if !(args.a > 1.0) || !args.a.is_finite() {
        return Err(CliError::Usage(format!("tail radius {} must exceed the mass parameter 1", args.a)));
    }
    let shell = RadialProfile::indicator(1.0, args.a, 1.2 * args.a, 40)?;
    let c = tail_bound_check(args.a, &shell)?;
    let (cs, cs_ok) = cauchy_schwarz_integral(&shell, nested_tol(profile));

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut worst = f64::INFINITY;
    let mut rows = Vec::with_capacity(args.samples);
    for _ in 0..args.samples {
        let a = rng.random_range(1.2..20.0);
        let b = a * rng.random_range(1.1..4.0);
        let radii = height_uniform_radii(1.0, a, b, 24)?;
        let v: Vec<f64> = radii.iter().map(|_| rng.random_range(0.0..1.0)).collect();
        let t = tail_bound_check(a, &RadialProfile::new(1.0, radii, v)?)?;
        worst = worst.min(t.slack() / t.bound);
        rows.push(vec![a, b, t.lhs, t.bound]);
    }
    let mut checks = vec![
        Check::at_most("shell_lhs_over_cs", c.lhs, cs),
        Check::at_most("shell_cs_over_bound", cs, c.bound),
    ];
    if args.samples > 0 {
        checks.push(Check::at_least("worst_relative_slack", worst, 0.0));
    }
    let env = ResultEnvelope::new(
        "tailbound",
        json!(args),
        json!({
            "shell": { "check": c, "cauchy_schwarz": cs, "ratio": c.lhs / c.norm_sq.powi(2) },
            "worst_relative_slack": if args.samples > 0 { json!(worst) } else { json!(null) },
            "tails_path": "tailbound.csv",
        }),
        checks,
        vec![],
    );
    let mut report = Report::new(env).file("tailbound.csv", csv(&["a", "b", "lhs", "bound"], rows)).seed(args.seed);
    if !cs_ok {
        report = report.nonconverged(vec!["Cauchy-Schwarz integral".into()]);
    }
    Ok(report)
}

pub fn conelimit(args: &ConelimitArgs, profile: Profile) -> Result<Report, CliError> {
    if !(args.a > 0.0 && args.b > args.a) || !args.b.is_finite() {
        return Err(CliError::Usage(format!("need 0 < a < b (a={}, b={})", args.a, args.b)));
    }
    let f = RadialProfile::indicator(args.a, args.a, args.b, 2)?;
    let c = cone_limit_scan(&f, &args.slist, nested_tol(profile))?;
    let nonconverged: Vec<String> =
        c.distances.iter().filter(|d| !d.converged).map(|d| format!("distance at s={}", d.s)).collect();
    let env = ResultEnvelope::new(
        "conelimit",
        json!(args),
        json!(c),
        vec![Check::holds("strictly_decreasing", c.strictly_decreasing()), Check::holds("dominated", c.dominated())],
        vec![],
    );
    Ok(Report::new(env).nonconverged(nonconverged))
}

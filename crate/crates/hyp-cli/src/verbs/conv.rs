use std::f64::consts::PI;

use closed_forms::{
    mu_cone_conv, mu_cone_conv_sup, mu_cone_conv_tagged, mu_self_conv, mu_self_conv_sup, mu_self_conv_tagged,
    self_conv_sup_exact, support_predicate, ConvPoint, SupportKind,
};
use radial_core::mc::{mc_pairing_oracle, Bump, Sheets};
use radial_core::quadrature::integrate_breaks;
use radial_core::slice::{mixed_conv_point, self_conv_point};
use radial_core::{phi, Adaptive, RadialProfile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::cli::{ConvEvalArgs, ConvKind, ConvValidateArgs};
use crate::settings::Profile;
use crate::{Check, CliError, Report, ResultEnvelope};

const MASSES: [f64; 3] = [0.5, 1.0, 2.0];

fn quad_opts(profile: Profile) -> Adaptive {
    Adaptive::rel(profile.rel_tol() * 1e-2).with_abs(1e-300)
}

/// Indicators whose convolution equals the bare density up to height `tau_top`.
fn unit_profiles(kind: ConvKind, s: f64, tau_top: f64) -> Result<(RadialProfile, RadialProfile), CliError> {
    let tau_top = tau_top.max(0.0);
    let f = RadialProfile::indicator(s, s, phi(s, tau_top) * 1.01 + s, 2)?;
    let g = match kind {
        ConvKind::SelfConv => f.clone(),
        ConvKind::Cone => RadialProfile::indicator(0.0, 0.0, tau_top * 1.01 + s, 2)?,
    };
    Ok((f, g))
}

fn quadrature(kind: ConvKind, f: &RadialProfile, g: &RadialProfile, rho: f64, tau: f64, opts: &Adaptive) -> Result<(f64, f64, bool), CliError> {
    let v = match kind {
        ConvKind::SelfConv => self_conv_point(f, g, rho, tau, opts)?,
        ConvKind::Cone => mixed_conv_point(f, g, rho, tau, opts),
    };
    Ok((v.value, v.error, v.converged))
}

fn closed(kind: ConvKind, p: &ConvPoint) -> f64 {
    match kind {
        ConvKind::SelfConv => mu_self_conv(p),
        ConvKind::Cone => mu_cone_conv(p),
    }
}

fn kind_name(kind: ConvKind) -> &'static str {
    match kind {
        ConvKind::SelfConv => "self",
        ConvKind::Cone => "cone",
    }
}

pub fn conv_eval(args: &ConvEvalArgs, profile: Profile) -> Result<Report, CliError> {
    let (s, rho, tau) = (args.s, args.rho, args.tau);
    let p = ConvPoint::new(s, rho, tau)?;
    let (value, branch, regime, sup) = match args.kind {
        ConvKind::SelfConv => {
            let e = mu_self_conv_tagged(&p);
            let sup = if tau > 0.0 {
                let (lower, upper) = mu_self_conv_sup(s, tau)?;
                json!({ "lower": lower, "upper": upper, "exact": self_conv_sup_exact(s, tau)? })
            } else {
                json!(null)
            };
            (e.value, format!("{:?}", e.tag.branch), Some(format!("{:?}", e.tag.regime)), sup)
        }
        ConvKind::Cone => {
            let (v, b) = mu_cone_conv_tagged(&p);
            let sup = if tau > 0.0 { json!({ "exact": mu_cone_conv_sup(s, tau)? }) } else { json!(null) };
            (v, format!("{b:?}"), None, sup)
        }
    };
    let (f, g) = unit_profiles(args.kind, s, tau)?;
    let (quad, quad_error, converged) = quadrature(args.kind, &f, &g, rho, tau, &quad_opts(profile))?;
    let check = if value == 0.0 {
        Check::at_most("quadrature_abs", quad.abs(), 1e-12)
    } else {
        Check::relative("quadrature_rel_err", quad, value, 1e-6)
    };
    let env = ResultEnvelope::new(
        "conv-eval",
        json!(args),
        json!({
            "kind": kind_name(args.kind),
            "value": value,
            "branch": branch,
            "regime": regime,
            "quadrature": quad,
            "quadrature_error": quad_error,
            "sup": sup,
        }),
        vec![check],
        vec![],
    );
    let mut report = Report::new(env);
    if !converged {
        report = report.nonconverged(vec![format!("slice quadrature at rho={rho}, tau={tau}")]);
    }
    Ok(report)
}

/// Uniform point under the outermost curve, kept a relative distance away from
/// every branch curve.
fn interior_point(rng: &mut ChaCha8Rng, s: f64, tau_max: f64, curves: impl Fn(f64) -> Vec<f64>) -> (f64, f64) {
    loop {
        let tau = tau_max * rng.random::<f64>();
        let cs = curves(tau);
        let top = cs.iter().copied().fold(0.0, f64::max);
        let rho = top * rng.random::<f64>();
        if tau < 1e-3 * s || cs.iter().any(|c| (rho - c).abs() < 1e-3 * s) {
            continue;
        }
        return (rho, tau);
    }
}

fn branch_curves(kind: ConvKind, s: f64, tau: f64) -> Vec<f64> {
    match kind {
        ConvKind::SelfConv => ConvPoint::new(s, 0.0, tau).map(|p| p.self_boundaries().to_vec()).unwrap_or_default(),
        ConvKind::Cone => vec![(tau - s).abs(), phi(s, tau), tau + s],
    }
}

#[derive(Clone, Debug, Serialize)]
struct PointRow {
    kind: &'static str,
    s: f64,
    rho: f64,
    tau: f64,
    closed: f64,
    quadrature: f64,
    rel_err: f64,
    converged: bool,
}

fn sample_points(kind: ConvKind, n: usize, rng: &mut ChaCha8Rng) -> Vec<(f64, f64, f64)> {
    let mut pts = Vec::with_capacity(n);
    while pts.len() < n {
        let s = MASSES[pts.len() % MASSES.len()];
        let (rho, tau) = interior_point(rng, s, 6.0 * s, |t| branch_curves(kind, s, t));
        let p = ConvPoint::new(s, rho, tau).expect("sampled point is in the domain");
        if kind == ConvKind::Cone && !support_predicate(&p, SupportKind::Cone) {
            continue;
        }
        pts.push((s, rho, tau));
    }
    pts
}

fn point_rows(kind: ConvKind, n: usize, rng: &mut ChaCha8Rng, opts: &Adaptive) -> Result<Vec<PointRow>, CliError> {
    let pts = sample_points(kind, n, rng);
    let units = MASSES.iter().map(|&s| unit_profiles(kind, s, 6.0 * s)).collect::<Result<Vec<_>, _>>()?;
    pts.par_iter()
        .map(|&(s, rho, tau)| {
            let (f, g) = &units[MASSES.iter().position(|&m| m == s).expect("mass from the list")];
            let c = closed(kind, &ConvPoint::new(s, rho, tau)?);
            let (q, _, converged) = quadrature(kind, f, g, rho, tau, opts)?;
            let rel_err = (q - c).abs() / c.abs().max(1e-300);
            Ok(PointRow { kind: kind_name(kind), s, rho, tau, closed: c, quadrature: q, rel_err, converged })
        })
        .collect()
}

/// `int int h(rho, tau) phi(rho, tau) 4 pi rho^2`, broken at the branch curves.
fn exact_pairing(kind: ConvKind, s: f64, b: &Bump) -> (f64, bool) {
    let opts = Adaptive::rel(1e-9).with_abs(1e-300);
    let (r0, r1) = ((b.rho0 - b.rho_width).max(0.0), b.rho0 + b.rho_width);
    let mut ok = true;
    let v = integrate_breaks(
        |t| {
            let mut pts = vec![r0, r1];
            pts.extend(branch_curves(kind, s, t).into_iter().filter(|&c| c > r0 && c < r1));
            pts.sort_by(f64::total_cmp);
            let inner = integrate_breaks(
                |r| {
                    let p = ConvPoint::new(s, r, t).expect("pairing point is in the domain");
                    closed(kind, &p) * b.radial(r, t) * 4.0 * PI * r * r
                },
                &pts,
                &opts,
            );
            ok &= inner.converged;
            inner.value
        },
        &[b.tau0 - b.tau_width, b.tau0 + b.tau_width],
        &opts,
    );
    (v.value, ok && v.converged)
}

#[derive(Clone, Debug, Serialize)]
struct BumpRow {
    kind: &'static str,
    s: f64,
    bump: [f64; 4],
    exact: f64,
    estimate: f64,
    std_error: f64,
    sigmas: f64,
}

fn bump_rows(n: usize, args: &ConvValidateArgs, rng: &mut ChaCha8Rng) -> Result<(Vec<BumpRow>, Vec<String>), CliError> {
    let mut rows = Vec::with_capacity(n);
    let mut failed = Vec::new();
    for i in 0..n {
        let kind = if i % 2 == 0 { ConvKind::SelfConv } else { ConvKind::Cone };
        let s = MASSES[(i / 2) % MASSES.len()];
        let b = Bump::new(
            s * rng.random_range(0.5..2.0),
            s * rng.random_range(0.3..0.8),
            s * rng.random_range(1.5..3.0),
            s * rng.random_range(0.3..0.8),
        );
        let (f, g) = unit_profiles(kind, s, b.tau0 + b.tau_width)?;
        let (exact, ok) = exact_pairing(kind, s, &b);
        if !ok {
            failed.push(format!("pairing integral of bump test {i}"));
        }
        let mc = mc_pairing_oracle(&f, &g, Sheets::Upper, &b, args.mc_samples, args.seed.wrapping_mul(1000).wrapping_add(i as u64));
        rows.push(BumpRow {
            kind: kind_name(kind),
            s,
            bump: [b.rho0, b.rho_width, b.tau0, b.tau_width],
            exact,
            estimate: mc.estimate,
            std_error: mc.std_error,
            sigmas: mc.sigmas_from(exact),
        });
    }
    Ok((rows, failed))
}

/// Worst cases of a validation run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ValidationSummary {
    pub points: usize,
    pub max_rel_err: f64,
    pub bump_tests: usize,
    pub max_sigmas: f64,
}

pub fn conv_validate(args: &ConvValidateArgs, profile: Profile) -> Result<Report, CliError> {
    if !(args.tol > 0.0) {
        return Err(CliError::Usage(format!("tolerance {} must be positive", args.tol)));
    }
    if args.mc_samples < 2 {
        return Err(CliError::Usage("Monte-Carlo tests need at least two samples".into()));
    }
    let opts = quad_opts(profile);
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut rows = point_rows(ConvKind::SelfConv, args.samples, &mut rng, &opts)?;
    rows.extend(point_rows(ConvKind::Cone, args.samples, &mut rng, &opts)?);
    let (bumps, mut nonconverged) = bump_rows(args.bumps.min(args.samples), args, &mut rng)?;
    nonconverged.extend(
        rows.iter()
            .filter(|r| !r.converged)
            .map(|r| format!("{} quadrature at s={}, rho={}, tau={}", r.kind, r.s, r.rho, r.tau)),
    );

    let summary = ValidationSummary {
        points: rows.len(),
        max_rel_err: rows.iter().map(|r| r.rel_err).fold(0.0, f64::max),
        bump_tests: bumps.len(),
        max_sigmas: bumps.iter().map(|b| b.sigmas).fold(0.0, f64::max),
    };
    let mut csv = String::from("kind,s,rho,tau,closed,quadrature,rel_err\n");
    for r in &rows {
        let cells = [r.s, r.rho, r.tau, r.closed, r.quadrature, r.rel_err].map(radial_core::field::fmt17);
        csv.push_str(&format!("{},{}\n", r.kind, cells.join(",")));
    }
    let env = ResultEnvelope::new(
        "conv-validate",
        json!(args),
        json!({ "summary": summary, "bumps": bumps, "points_path": "conv-validate.points.csv" }),
        vec![
            Check::at_most("max_rel_err", summary.max_rel_err, args.tol),
            Check::below("max_mc_sigmas", summary.max_sigmas, 3.0),
        ],
        vec![],
    );
    Ok(Report::new(env).file("conv-validate.points.csv", csv.into_bytes()).seed(args.seed).nonconverged(nonconverged))
}

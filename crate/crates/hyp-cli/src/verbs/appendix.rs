use std::f64::consts::PI;
use std::fmt::Write as _;

use comparison::asymptotics::default_rates;
use comparison::{asymptotic_integral_suite, derivative_limits, ratio_scan, Identity, Method, RatioSample, RatioScan, Schedule};
use serde_json::json;

use crate::cli::{Figure1Args, LimitKind, LimitsArgs};
use crate::{Check, CliError, Report, ResultEnvelope};

/// Rate at which the small-a behaviour of `I`, `II` and their ratio is checked.
const SMALL_RATE: f64 = 1e-3;

pub fn figure1(args: &Figure1Args) -> Result<Report, CliError> {
    if !(args.amin > 0.0 && args.amax > args.amin) || args.steps < 2 {
        return Err(CliError::Usage(format!(
            "need 0 < amin < amax and at least two steps (amin={}, amax={}, steps={})",
            args.amin, args.amax, args.steps
        )));
    }
    let scan = ratio_scan(args.amin, args.amax, args.steps, &Method::Panels)?;
    let small = RatioSample::at(SMALL_RATE, &Method::Panels)?;
    let mut csv = Vec::new();
    scan.write_csv(&mut csv)?;

    let checks = vec![
        Check::above("min_ratio_margin", scan.min_margin, 0.0),
        Check::relative("ratio_at_1e-3", small.ratio, 2.0 * PI, 0.02),
        Check::relative("a4_i_at_1e-3", small.n(), 32.0 * PI.powi(3), 1e-3),
        Check::relative("a4_ii_at_1e-3", small.d(), 16.0 * PI * PI, 1e-3),
    ];
    let env = ResultEnvelope::new(
        "figure1",
        json!(args),
        json!({
            "min_margin": scan.min_margin,
            "a_at_min": scan.a_at_min,
            "below": scan.below,
            "small_rate": { "a": SMALL_RATE, "ratio": small.ratio, "a4_i": small.n(), "a4_ii": small.d() },
            "csv_path": "figure1.csv",
        }),
        checks,
        vec![],
    );
    let mut report = Report::new(env).file("figure1.csv", csv);
    if args.svg {
        report = report.file("figure1.svg", ratio_svg(&scan).into_bytes());
    }
    Ok(report)
}

/// Polyline of the ratio against `a` with the level `2 pi` dashed.
pub fn ratio_svg(scan: &RatioScan) -> String {
    let (w, h, pad) = (640.0, 400.0, 40.0);
    let xs: Vec<f64> = scan.samples.iter().map(|p| p.a).collect();
    let ys: Vec<f64> = scan.samples.iter().map(|p| p.ratio).chain([2.0 * PI]).collect();
    let (x0, x1) = (xs.iter().copied().fold(f64::INFINITY, f64::min), xs.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    let (y0, y1) = (ys.iter().copied().fold(f64::INFINITY, f64::min), ys.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    let (dx, dy) = ((x1 - x0).max(1e-300), (y1 - y0).max(1e-300));
    let px = |x: f64| pad + (x - x0) / dx * (w - 2.0 * pad);
    let py = |y: f64| h - pad - (y - y0) / dy * (h - 2.0 * pad);
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let pts: Vec<String> = scan.samples.iter().map(|p| format!("{:.2},{:.2}", px(p.a), py(p.ratio))).collect();
    let _ = writeln!(out, r#"<polyline fill="none" stroke="black" stroke-width="1.5" points="{}"/>"#, pts.join(" "));
    let _ = writeln!(
        out,
        r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="red" stroke-dasharray="6,4"/>"#,
        px(x0),
        px(x1),
        y = py(2.0 * PI)
    );
    let _ = writeln!(out, r#"<text x="{pad}" y="{:.0}" font-size="12">a</text>"#, h - 10.0);
    let _ = writeln!(out, r#"<text x="6" y="{:.0}" font-size="12">I/II</text>"#, pad - 10.0);
    out.push_str("</svg>\n");
    out
}

pub fn limits(args: &LimitsArgs) -> Result<Report, CliError> {
    let (values, checks) = match args.which {
        LimitKind::Ratio | LimitKind::Derivs => {
            let rep = derivative_limits(&Schedule::default(), &Method::Panels)?;
            let [r, d1, d2, d3] = &rep.ratio;
            let mut checks = vec![Check::relative("ratio_limit", r.estimate, r.target, 0.02)];
            if args.which == LimitKind::Derivs {
                checks.extend([
                    Check::at_most("d1_abs_err", d1.abs_error(), 0.05 * 2.0 * PI),
                    Check::at_most("d2_abs_err", d2.abs_error(), 0.05 * 2.0 * PI),
                    Check::at_most("d3_rel_err", d3.rel_error(), 0.2),
                    Check::at_most("nd_derivative_rel_err", rep.nd_derivative.rel_error(), 0.05),
                ]);
            }
            (serde_json::to_value(&rep).expect("report serializes"), checks)
        }
        LimitKind::Asymp => {
            let reports = asymptotic_integral_suite(&default_rates())?;
            let mut checks: Vec<Check> = reports.iter().map(|r| Check::holds(r.label, r.pass)).collect();
            let log = reports.iter().find(|r| r.identity == Identity::LogLimit).expect("suite has the log limit");
            let (_, finest) = log
                .samples
                .iter()
                .map(|&(a, lhs, _)| (a, lhs))
                .fold((f64::INFINITY, f64::NAN), |best, cur| if cur.0 < best.0 { cur } else { best });
            checks.push(Check::at_most("log_limit_abs_err", (finest + 1.0).abs(), 1e-2));
            (json!({ "identities": reports, "log_limit": finest }), checks)
        }
    };
    let env = ResultEnvelope::new("limits", json!(args), values, checks, vec![]);
    Ok(Report::new(env))
}

use lorentz_geometry::{
    bounded_ball_certificate, cap_measure, dyadic_cap_asymptotics, form_defect, lorentz_invariance_check, normalize_cap,
    BoostParam, CapSpec, GaussianTest, SpaceTimePoint,
};
use radial_core::QuadratureSpec;
use serde_json::json;

use crate::cli::{CapArgs, LorentzArgs};
use crate::settings::Profile;
use crate::{Check, CliError, Report, ResultEnvelope};

const AXIS: [f64; 3] = [1.0, 0.0, 0.0];

pub fn cap(args: &CapArgs) -> Result<Report, CliError> {
    let cap = CapSpec::new(args.s, args.a, args.b, AXIS, args.eps)?;
    let measure = cap_measure(&cap)?;
    let doubled = cap_measure(&cap.rescaled(2.0))?;
    let mut checks = vec![Check::relative("rescaling_rel_err", doubled, 4.0 * measure, 1e-10)];
    let mut values = json!({ "measure": measure, "measure_doubled": doubled, "spherical_area": cap.spherical_area() });

    if args.normalize {
        let n = normalize_cap(&cap).map_err(|r| {
            let names: Vec<String> = r.failed.iter().map(|h| format!("{h:?}")).collect();
            CliError::Usage(format!("cap normalization hypotheses fail: {}", names.join(", ")))
        })?;
        checks.push(Check::holds("normalized_measure", n.measure_pass));
        checks.push(Check::holds("normalized_range", n.range_pass));
        values["normalized"] = json!(n);
    }
    if let Some(k) = args.dyadic {
        let asym = dyadic_cap_asymptotics(args.s, k, args.eps)?;
        let ball = bounded_ball_certificate(args.s, k, args.eps)?;
        checks.push(Check::at_most("ball_radius", ball.radius, ball.radius_bound));
        checks.push(Check::at_most("ball_first_coordinate", ball.max_first, ball.first_bound));
        checks.push(Check::at_most("ball_transverse", ball.max_transverse, ball.transverse_bound));
        values["dyadic"] = json!({ "k": k, "asymptotics": asym, "ball": ball });
    }
    let env = ResultEnvelope::new("cap", json!(args), values, checks, vec![]);
    Ok(Report::new(env))
}

pub fn gaussian_test() -> GaussianTest {
    GaussianTest { center: SpaceTimePoint::new([1.2, -0.4, 0.3], 1.0), width: 0.9 }
}

pub fn lorentz(args: &LorentzArgs, profile: Profile) -> Result<Report, CliError> {
    let axis: [f64; 3] = args
        .axis
        .as_slice()
        .try_into()
        .map_err(|_| CliError::Usage(format!("axis needs three components, got {}", args.axis.len())))?;
    let bp = BoostParam::along(args.t, axis)?;
    if !(args.s > 0.0) {
        return Err(CliError::Usage(format!("mass parameter {} must be positive", args.s)));
    }
    let quad = QuadratureSpec::default().with_tol(profile.rel_tol());
    let rep = lorentz_invariance_check(&gaussian_test(), &bp, args.s, &quad);
    let p = SpaceTimePoint::new([1.2, -0.4, 0.3], 1.0);
    let q = SpaceTimePoint::new([-0.7, 1.1, 0.5], -0.6);
    let defect = form_defect(&bp, &p, &q);
    let scale = (1.0 / (1.0 - args.t * args.t)).max(1.0);
    let env = ResultEnvelope::new(
        "lorentz",
        json!(args),
        json!({ "lhs": rep.lhs, "rhs": rep.rhs, "rel_err": rep.rel_err, "form_defect": defect }),
        vec![Check::at_most("rel_err", rep.rel_err, 1e-6), Check::at_most("form_defect", defect, 16e-12 * scale)],
        vec![],
    );
    let report = Report::new(env);
    Ok(if rep.converged { report } else { report.nonconverged(vec!["sheet integral".into()]) })
}

//! Convergence of `f mu_s * f mu_s` to the cone convolution `f sigma_c * f sigma_c`
//! as `s -> 0`, for `f` supported away from the origin.

use std::f64::consts::PI;

use radial_core::quadrature::integrate_breaks;
use radial_core::slice::self_slice;
use radial_core::{hyperbolic_conv, phi, Adaptive, FieldGrid, QuadratureSpec, RadialProfile};
use serde::Serialize;

use crate::{ExtremizerError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConeDistance {
    pub s: f64,
    /// `|| f mu_s * f mu_s - f sigma_c * f sigma_c ||_2`.
    pub distance: f64,
    pub converged: bool,
    /// Largest sampled value of `f mu_s * f mu_s`.
    pub field_max: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeLimit {
    pub a: f64,
    /// `4 pi ||f||_inf^2 (1 + 1/a)`.
    pub dominating_bound: f64,
    pub cone_field_max: f64,
    pub distances: Vec<ConeDistance>,
}

impl ConeLimit {
    pub fn strictly_decreasing(&self) -> bool {
        self.distances.windows(2).all(|w| w[1].distance < w[0].distance)
    }

    pub fn dominated(&self) -> bool {
        self.cone_field_max <= self.dominating_bound && self.distances.iter().all(|d| d.field_max <= self.dominating_bound)
    }
}

/// The same radial samples on the sheet of parameter `s` (`0` is the cone).
fn on_sheet(f: &RadialProfile, s: f64) -> Result<RadialProfile> {
    Ok(RadialProfile::new(s, f.radii().to_vec(), f.values().to_vec())?)
}

/// `rho` where some slice window of `g` changes regime or meets a support end.
fn rho_breaks(g: &RadialProfile, tau: f64, out: &mut Vec<f64>) {
    let s = g.s();
    let h = 0.5 * tau;
    let r = phi(s, tau);
    out.extend([r - s, (tau * tau + 4.0 * s * s).sqrt(), r + s, tau]);
    let (t0, t1) = g.t_range();
    for t in [t0, t1] {
        let x = (t - h).abs();
        if x <= h {
            let (p, q) = (phi(s, h + x), phi(s, h - x));
            out.extend([p - q, p + q]);
        }
    }
}

fn distance_sq(fs: &RadialProfile, fc: &RadialProfile, rel_tol: f64) -> (f64, bool) {
    let inner = Adaptive::rel(rel_tol * 1e-2).with_abs(1e-300);
    let mid = Adaptive::rel(rel_tol * 1e-1).with_abs(1e-300);
    let outer = Adaptive::rel(rel_tol).with_abs(1e-300);
    let (a0, a1) = fs.t_range();
    let (c0, c1) = fc.t_range();
    let mut taus = vec![2.0 * a0, a0 + a1, 2.0 * a1, 2.0 * c0, c0 + c1, 2.0 * c1];
    taus.sort_by(f64::total_cmp);
    taus.dedup();
    let mut ok = true;
    let r = integrate_breaks(
        |tau| {
            let mut pts = vec![0.0];
            rho_breaks(fs, tau, &mut pts);
            rho_breaks(fc, tau, &mut pts);
            let top = pts.iter().copied().fold(0.0, f64::max);
            pts.retain(|&p| p >= 0.0 && p <= top);
            pts.sort_by(f64::total_cmp);
            pts.dedup();
            let mut local = true;
            let v = integrate_breaks(
                |rho| {
                    let js = self_slice(fs, fs, rho, tau, &inner);
                    let jc = self_slice(fc, fc, rho, tau, &inner);
                    local &= js.converged && jc.converged;
                    (js.value - jc.value).powi(2)
                },
                &pts,
                &mid,
            );
            ok &= local && v.converged;
            v.value
        },
        &taus,
        &outer,
    );
    (16.0 * PI.powi(3) * r.value, ok && r.converged)
}

fn field_max(g: &RadialProfile, grid: &FieldGrid) -> Result<f64> {
    let out = hyperbolic_conv(g, g, grid, &QuadratureSpec::default())?;
    Ok(out.field.max_abs())
}

pub fn cone_limit_scan(f: &RadialProfile, s_list: &[f64], rel_tol: f64) -> Result<ConeLimit> {
    let a = f.radii()[0];
    if !(a > 0.0) {
        return Err(ExtremizerError::Domain("profile must be supported away from the origin".into()));
    }
    if s_list.iter().any(|&s| !(s >= 0.0 && s < a)) || s_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(ExtremizerError::Domain(format!("s list must decrease within [0, {a})")));
    }
    let fc = on_sheet(f, 0.0)?;
    let r1 = *f.radii().last().unwrap();
    let grid = FieldGrid::uniform((0.0, 2.0 * r1, 81), (0.0, 2.0 * r1, 81));
    let distances = s_list
        .iter()
        .map(|&s| {
            let fs = on_sheet(f, s)?;
            let (d2, converged) = distance_sq(&fs, &fc, rel_tol);
            Ok(ConeDistance { s, distance: d2.max(0.0).sqrt(), converged, field_max: field_max(&fs, &grid)? })
        })
        .collect::<Result<_>>()?;
    Ok(ConeLimit {
        a,
        dominating_bound: 4.0 * PI * f.max_abs().powi(2) * (1.0 + 1.0 / a),
        cone_field_max: field_max(&fc, &grid)?,
        distances,
    })
}

//! Profiles supported far out on the hyperboloid: `||f mu * f mu||_2^2` against
//! `2 pi (1 + 1/sqrt(a^2 - 1)) ||f||_2^4` for `f` supported in `|y| >= a`.

use std::f64::consts::PI;

use radial_core::quadrature::integrate_breaks;
use radial_core::slice::{measure_self_conv, self_window};
use radial_core::{phi, Adaptive, RadialProfile};
use serde::Serialize;

use crate::dyadic::fine_resolution;
use crate::nodal::nodal_norm_sq;
use crate::slab::bilinear_norm_sq;
use crate::{ExtremizerError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TailCheck {
    pub a: f64,
    pub lhs: f64,
    pub bound: f64,
    pub norm_sq: f64,
}

impl TailCheck {
    pub fn slack(&self) -> f64 {
        self.bound - self.lhs
    }

    pub fn holds(&self) -> bool {
        self.lhs <= self.bound
    }
}

/// `2 pi (1 + 1/sqrt((a/s)^2 - 1))`, infinite at `a = s`.
pub fn tail_constant(s: f64, a: f64) -> f64 {
    let q = a / s;
    2.0 * PI * (1.0 + 1.0 / (q * q - 1.0).sqrt())
}

/// Whether the interpolated profile vanishes on `r < a`.
pub fn supported_beyond(f: &RadialProfile, a: f64) -> bool {
    let r = f.radii();
    f.values().iter().enumerate().all(|(i, &v)| v == 0.0 || (r[i] >= a && (i == 0 || r[i - 1] >= a)))
}

pub fn tail_bound_check(a: f64, f: &RadialProfile) -> Result<TailCheck> {
    let s = f.s();
    if !(a > s) {
        return Err(ExtremizerError::Domain(format!("tail radius a = {a} must exceed s = {s}")));
    }
    if !supported_beyond(f, a) {
        return Err(ExtremizerError::Domain(format!("profile is not supported in |y| >= {a}")));
    }
    let norm_sq = nodal_norm_sq(f);
    let lhs = bilinear_norm_sq(f, f, &fine_resolution(f, f, 1.0));
    Ok(TailCheck { a, lhs, bound: tail_constant(s, a) * norm_sq * norm_sq, norm_sq })
}

/// `int (|f|^2 mu * |f|^2 mu)(mu * mu)`, the integrated right side of the
/// pointwise Cauchy–Schwarz bound `|f mu * f mu|^2 <= (|f|^2 mu * |f|^2 mu)(mu * mu)`,
/// by nested adaptive quadrature.
pub fn cauchy_schwarz_integral(f: &RadialProfile, rel_tol: f64) -> (f64, bool) {
    let s = f.s();
    let (t0, t1) = f.t_range();
    let sq = |t: f64| f.eval_height(t).powi(2);
    let inner = Adaptive::rel(rel_tol * 1e-2).with_abs(1e-300);
    let mid = Adaptive::rel(rel_tol * 1e-1).with_abs(1e-300);
    let outer = Adaptive::rel(rel_tol).with_abs(1e-300);
    let mut ok = true;
    let j2 = |rho: f64, tau: f64, ok: &mut bool| -> f64 {
        let Some((lo, hi)) = self_window(s, rho, tau) else {
            return 0.0;
        };
        let half = 0.5 * tau;
        let hi = hi.min(t1 - half).min(half - t0);
        if hi <= lo {
            return 0.0;
        }
        let mut pts: Vec<f64> = f
            .heights()
            .iter()
            .flat_map(|&t| [t - half, half - t])
            .filter(|&x| x > lo && x < hi)
            .chain([lo, hi])
            .collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let r = integrate_breaks(|x| 2.0 * sq(half + x) * sq(half - x), &pts, &inner);
        *ok &= r.converged;
        r.value
    };
    let r = integrate_breaks(
        |tau| {
            let r = phi(s, tau);
            let mut pts = vec![0.0, r - s, (tau * tau + 4.0 * s * s).sqrt(), r + s];
            pts.sort_by(f64::total_cmp);
            pts.dedup();
            let mut local = true;
            let v = integrate_breaks(|rho| rho * j2(rho, tau, &mut local) * measure_self_conv(s, rho, tau), &pts, &mid);
            ok &= local && v.converged;
            8.0 * PI * PI * v.value
        },
        &[2.0 * t0, t0 + t1, 2.0 * t1],
        &outer,
    );
    (r.value, ok && r.converged)
}

use std::f64::consts::PI;

use crate::coords::phi;
use crate::error::{CoreError, Result};
use crate::field::Conv2DField;
use crate::profile::{RadialProfile, Sample};
use crate::quadrature::{integrate, integrate_breaks, Adaptive};
use crate::slice::{self_slice, self_window};

fn segment_opts() -> Adaptive {
    Adaptive::rel(1e-13).with_abs(1e-300)
}

/// `int |f|^p dmu_s = 4 pi int |f(phi_s(t))|^p phi_s(t) dt`, integrated
/// segment by segment in the height variable.
fn power_integral<V: Sample>(f: &RadialProfile<V>, p: f64) -> f64 {
    let s = f.s();
    let opts = segment_opts();
    f.heights()
        .windows(2)
        .map(|w| {
            integrate(
                |t| {
                    let a = f.eval_height(t).abs();
                    let v = if p == 2.0 { a * a } else { a.powf(p) };
                    v * phi(s, t)
                },
                w[0],
                w[1],
                &opts,
            )
            .value
        })
        .sum::<f64>()
        * 4.0
        * PI
}

/// `||f||_{L^p(mu_s)}` of a radial profile.
pub fn lp_norm<V: Sample>(f: &RadialProfile<V>, p: f64) -> Result<f64> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(CoreError::Domain(format!("exponent p = {p} must lie in [1, inf)")));
    }
    Ok(power_integral(f, p).powf(1.0 / p))
}

/// `||f||_{L^2(mu_s)}^2`.
pub fn l2_norm_sq<V: Sample>(f: &RadialProfile<V>) -> f64 {
    power_integral(f, 2.0)
}

/// `int f dmu_s` of a real profile.
pub fn mu_integral(f: &RadialProfile) -> f64 {
    let s = f.s();
    let opts = segment_opts();
    f.heights()
        .windows(2)
        .map(|w| integrate(|t| f.eval_height(t) * phi(s, t), w[0], w[1], &opts).value)
        .sum::<f64>()
        * 4.0
        * PI
}

/// `|| h ||_{L2(R^4)}` of a sampled radial field with a Richardson error estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldNorm {
    pub value: f64,
    pub error: f64,
    /// Nonzero values on the outer rho column or the last tau row.
    pub touches_boundary: bool,
}

fn trapezoid_2d(h: &Conv2DField, stride: usize) -> f64 {
    let ri: Vec<usize> = strided(h.rho.len(), stride);
    let tj: Vec<usize> = strided(h.tau.len(), stride);
    let row = |j: usize| -> f64 {
        ri.windows(2)
            .map(|w| {
                let (a, b) = (w[0], w[1]);
                let fa = h.get(a, j).powi(2) * h.rho[a].powi(2);
                let fb = h.get(b, j).powi(2) * h.rho[b].powi(2);
                0.5 * (h.rho[b] - h.rho[a]) * (fa + fb)
            })
            .sum()
    };
    let rows: Vec<f64> = tj.iter().map(|&j| row(j)).collect();
    4.0 * PI
        * tj
            .windows(2)
            .zip(rows.windows(2))
            .map(|(t, r)| 0.5 * (h.tau[t[1]] - h.tau[t[0]]) * (r[0] + r[1]))
            .sum::<f64>()
}

fn strided(n: usize, stride: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).step_by(stride).collect();
    if v.last() != Some(&(n - 1)) {
        v.push(n - 1);
    }
    v
}

pub fn l2_field_norm(h: &Conv2DField) -> FieldNorm {
    if h.rho.len() < 2 || h.tau.len() < 2 {
        return FieldNorm {
            value: 0.0,
            error: 0.0,
            touches_boundary: h.max_abs() > 0.0,
        };
    }
    let fine = trapezoid_2d(h, 1);
    let coarse = trapezoid_2d(h, 2);
    let nr = h.rho.len();
    let nt = h.tau.len();
    let touches = (0..nt).any(|j| h.get(nr - 1, j) != 0.0) || (0..nr).any(|i| h.get(i, nt - 1) != 0.0);
    let value = fine.sqrt();
    FieldNorm {
        value,
        error: ((fine - coarse).abs() / 3.0).sqrt().min(value.max((fine - coarse).abs().sqrt())),
        touches_boundary: touches,
    }
}

/// Radii `rho` at which `half_offset(s, rho, tau) = x`.
fn offset_radii(s: f64, tau: f64, x: f64) -> [f64; 2] {
    let b = tau * tau + 4.0 * s * s + 4.0 * x * x;
    let d = (b * b - 16.0 * x * x * tau * tau).max(0.0).sqrt();
    [(0.5 * (b - d)).sqrt(), (0.5 * (b + d)).sqrt()]
}

/// `int (f mu_s * g mu_s) 4 pi rho^2 drho dtau` by nested adaptive
/// quadrature of the pointwise slice densities.
pub fn conv_mass(f: &RadialProfile, g: &RadialProfile, rel_tol: f64) -> Result<(f64, bool)> {
    if f.s() != g.s() {
        return Err(CoreError::MassMismatch(f.s(), g.s()));
    }
    let s = f.s();
    let (f0, f1) = f.t_range();
    let (g0, g1) = g.t_range();
    let mut tau_pts = vec![f0 + g0, f0 + g1, f1 + g0, f1 + g1];
    tau_pts.sort_by(f64::total_cmp);
    tau_pts.dedup();
    let ends = [f0, f1, g0, g1];
    let inner = Adaptive::rel(rel_tol * 1e-2).with_abs(1e-300);
    let mid = Adaptive::rel(rel_tol * 1e-1).with_abs(1e-300);
    let outer = Adaptive::rel(rel_tol).with_abs(1e-300);
    let mut ok = true;
    let r = integrate_breaks(
        |tau| {
            if tau <= 0.0 {
                return 0.0;
            }
            let r = phi(s, tau);
            let half = 0.5 * tau;
            let mut pts = vec![0.0, r - s, (tau * tau + 4.0 * s * s).sqrt(), r + s];
            // the window ends cross a support end here
            for &t in &ends {
                for x in [t - half, half - t] {
                    if x > 0.0 && x < half {
                        pts.extend(offset_radii(s, tau, x));
                    }
                }
            }
            pts.retain(|&p| p >= 0.0 && p <= r + s);
            pts.sort_by(f64::total_cmp);
            pts.dedup();
            let inner_r = integrate_breaks(
                |rho| {
                    if self_window(s, rho, tau).is_none() {
                        return 0.0;
                    }
                    rho * self_slice(f, g, rho, tau, &inner).value
                },
                &pts,
                &mid,
            );
            ok &= inner_r.converged;
            8.0 * PI * PI * inner_r.value
        },
        &tau_pts,
        &outer,
    );
    Ok((r.value, ok && r.converged))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldGrid;

    #[test]
    fn cone_shell_norm() {
        let f = RadialProfile::indicator(0.0, 1.0, 2.0, 8).unwrap();
        assert!((l2_norm_sq(&f) - 6.0 * PI).abs() < 1e-12);
        assert!((lp_norm(&f, 2.0).unwrap() - (6.0 * PI).sqrt()).abs() < 1e-12);
        assert!(lp_norm(&f, 0.5).is_err());
    }

    #[test]
    fn zero_profile_and_field() {
        let f = RadialProfile::indicator(1.0, 1.0, 3.0, 8).unwrap().scaled(0.0);
        assert_eq!(lp_norm(&f, 3.0).unwrap(), 0.0);
        let h = Conv2DField::zeros(&FieldGrid::uniform((0.0, 1.0, 5), (0.0, 1.0, 5)));
        let n = l2_field_norm(&h);
        assert_eq!(n.value, 0.0);
        assert!(!n.touches_boundary);
    }
}

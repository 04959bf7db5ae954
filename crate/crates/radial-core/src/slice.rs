//! Sphere-slice representation of convolutions of radial measures.
//!
//! A pair of points at heights `t1`, `t2` on two sheets lies on spheres of
//! radii `phi(t1)`, `phi(t2)`; their sum has spatial modulus `rho` exactly
//! when `|phi(t1) - phi(t2)| <= rho <= phi(t1) + phi(t2)`, where the sphere
//! pair density is `2 pi / rho`. Every density below is therefore
//! `(2 pi / rho) J(rho, tau)` with `J` a one-dimensional integral of the
//! profile product over the admissible window.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::coords::{dphi, phi};
use crate::error::{CoreError, Result};
use crate::field::{Conv2DField, FieldGrid};
use crate::profile::RadialProfile;
use crate::quadrature::{integrate_breaks, Adaptive, QuadratureSpec};

/// Half-offset `x` solving `phi(tau/2 + x) -/+ phi(tau/2 - x) = rho`.
///
/// The same expression inverts both the difference branch (`rho < tau`) and
/// the sum branch (`rho^2 >= tau^2 + 4 s^2`).
#[inline]
pub fn half_offset(s: f64, rho: f64, tau: f64) -> f64 {
    let gap = (tau - rho) * (tau + rho);
    0.5 * rho * ((gap + 4.0 * s * s) / gap).max(0.0).sqrt()
}

/// Offsets `x` in `[0, tau/2]` around the midpoint `tau/2` for which the pair
/// `(tau/2 + x, tau/2 - x)` contributes at `(rho, tau)`; same sheet, same `s`.
pub fn self_window(s: f64, rho: f64, tau: f64) -> Option<(f64, f64)> {
    if !(tau > 0.0 && rho >= 0.0) {
        return None;
    }
    let half = 0.5 * tau;
    let r = phi(s, tau);
    if rho >= r + s {
        return None;
    }
    let hi = if rho < r - s {
        half_offset(s, rho, tau).min(half)
    } else {
        half
    };
    let lo = if rho * rho > tau * tau + 4.0 * s * s {
        half_offset(s, rho, tau).min(half)
    } else {
        0.0
    };
    (hi > lo).then_some((lo, hi))
}

/// Lower-sheet heights `w >= 0` whose partner at `tau + w` on the upper sheet
/// contributes at `(rho, tau)`, for `tau >= 0`. The upper end may be infinite.
pub fn cross_window(s: f64, rho: f64, tau: f64) -> Option<(f64, f64)> {
    if !(tau >= 0.0 && rho >= 0.0) {
        return None;
    }
    let r = phi(s, tau);
    if rho < r - s {
        return None;
    }
    let hi = if rho < tau {
        (half_offset(s, rho, tau) - 0.5 * tau).max(0.0)
    } else {
        f64::INFINITY
    };
    let lo = if rho > r + s {
        (half_offset(s, rho, tau) - 0.5 * tau).max(0.0)
    } else {
        0.0
    };
    (hi > lo).then_some((lo, hi))
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    // f increasing with f(lo) <= 0 <= f(hi)
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Heights `t` in `[0, tau]` on the sheet of parameter `s1` whose partner at
/// `tau - t` on the sheet of parameter `s2` contributes at `(rho, tau)`.
/// At most two intervals.
pub fn mixed_windows(s1: f64, s2: f64, rho: f64, tau: f64) -> Vec<(f64, f64)> {
    if !(tau > 0.0 && rho >= 0.0) {
        return vec![];
    }
    let diff = |t: f64| phi(s1, t) - phi(s2, tau - t);
    let sum = |t: f64| phi(s1, t) + phi(s2, tau - t);
    let slope = |t: f64| dphi(s1, t) - dphi(s2, tau - t);
    if diff(0.0) > rho || diff(tau) < -rho {
        return vec![];
    }
    let a = if diff(0.0) >= -rho {
        0.0
    } else {
        bisect(|t| diff(t) + rho, 0.0, tau)
    };
    let b = if diff(tau) <= rho {
        tau
    } else {
        bisect(|t| diff(t) - rho, 0.0, tau)
    };
    let tm = if slope(0.0) >= 0.0 {
        0.0
    } else if slope(tau) <= 0.0 {
        tau
    } else {
        bisect(slope, 0.0, tau)
    };
    if sum(tm) >= rho {
        return if b > a { vec![(a, b)] } else { vec![] };
    }
    let alpha = if sum(0.0) <= rho {
        0.0
    } else {
        bisect(|t| rho - sum(t), 0.0, tm)
    };
    let beta = if sum(tau) <= rho {
        tau
    } else {
        bisect(|t| sum(t) - rho, tm, tau)
    };
    [(a, b.min(alpha)), (a.max(beta), b)]
        .into_iter()
        .filter(|(x, y)| y > x)
        .collect()
}

/// Pointwise density with its quadrature error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointValue {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

impl PointValue {
    fn exact(value: f64) -> Self {
        Self {
            value,
            error: 0.0,
            converged: true,
        }
    }
}

fn check_mass(f: &RadialProfile, g: &RadialProfile) -> Result<()> {
    if f.s() != g.s() {
        return Err(CoreError::MassMismatch(f.s(), g.s()));
    }
    Ok(())
}

fn kinks(points: &mut Vec<f64>, lo: f64, hi: f64) -> Vec<f64> {
    points.retain(|&x| x > lo && x < hi);
    points.push(lo);
    points.push(hi);
    points.sort_by(f64::total_cmp);
    points.dedup();
    points.clone()
}

fn slice_integral(f: impl FnMut(f64) -> f64, pts: &[f64], opts: &Adaptive) -> PointValue {
    let r = integrate_breaks(f, pts, opts);
    PointValue {
        value: r.value,
        error: r.error,
        converged: r.converged,
    }
}

/// `J(rho, tau)` for `f mu_s * g mu_s`.
pub fn self_slice(f: &RadialProfile, g: &RadialProfile, rho: f64, tau: f64, opts: &Adaptive) -> PointValue {
    let s = f.s();
    let Some((lo, hi)) = self_window(s, rho, tau) else {
        return PointValue::exact(0.0);
    };
    let half = 0.5 * tau;
    // restrict to where both factors can be nonzero
    let t_hi = f.t_range().1.max(g.t_range().1);
    let t_lo = f.t_range().0.min(g.t_range().0);
    let hi = hi.min(t_hi - half).min(half - t_lo);
    if hi <= lo {
        return PointValue::exact(0.0);
    }
    let mut pts: Vec<f64> = f
        .heights()
        .iter()
        .chain(g.heights())
        .flat_map(|&t| [t - half, half - t])
        .collect();
    let pts = kinks(&mut pts, lo, hi);
    slice_integral(
        |x| f.eval_height(half + x) * g.eval_height(half - x) + f.eval_height(half - x) * g.eval_height(half + x),
        &pts,
        opts,
    )
}

/// Density of `f mu_s * g mu_s` at `(rho, tau)`.
pub fn self_conv_point(f: &RadialProfile, g: &RadialProfile, rho: f64, tau: f64, opts: &Adaptive) -> Result<PointValue> {
    check_mass(f, g)?;
    if rho == 0.0 {
        if !(tau > 0.0) {
            return Ok(PointValue::exact(0.0));
        }
        let half = 0.5 * tau;
        let p0 = 2.0 * f.eval_height(half) * g.eval_height(half);
        return Ok(PointValue::exact(2.0 * PI * p0 * phi(f.s(), half) / tau));
    }
    let j = self_slice(f, g, rho, tau, opts);
    Ok(PointValue {
        value: 2.0 * PI * j.value / rho,
        error: 2.0 * PI * j.error / rho,
        converged: j.converged,
    })
}

/// `J(rho, tau)` for `f_+ mu_+ * f_- mu_-`.
pub fn cross_slice(fp: &RadialProfile, fm: &RadialProfile, rho: f64, tau: f64, opts: &Adaptive) -> PointValue {
    let (upper, lower, tau) = if tau >= 0.0 { (fp, fm, tau) } else { (fm, fp, -tau) };
    let Some((lo, hi)) = cross_window(upper.s(), rho, tau) else {
        return PointValue::exact(0.0);
    };
    let (u0, u1) = upper.t_range();
    let (l0, l1) = lower.t_range();
    let lo = lo.max(l0).max(u0 - tau);
    let hi = hi.min(l1).min(u1 - tau);
    if hi <= lo {
        return PointValue::exact(0.0);
    }
    let mut pts: Vec<f64> = lower
        .heights()
        .iter()
        .copied()
        .chain(upper.heights().iter().map(|t| t - tau))
        .collect();
    let pts = kinks(&mut pts, lo, hi);
    slice_integral(|w| upper.eval_height(tau + w) * lower.eval_height(w), &pts, opts)
}

/// Density of `f_+ mu_+ * f_- mu_-` at `(rho, tau)` for either sign of `tau`.
pub fn cross_conv_point(fp: &RadialProfile, fm: &RadialProfile, rho: f64, tau: f64, opts: &Adaptive) -> Result<PointValue> {
    check_mass(fp, fm)?;
    let j = cross_slice(fp, fm, rho, tau, opts);
    if rho == 0.0 {
        let v = if j.value == 0.0 { 0.0 } else { f64::INFINITY };
        return Ok(PointValue::exact(v));
    }
    Ok(PointValue {
        value: 2.0 * PI * j.value / rho,
        error: 2.0 * PI * j.error / rho,
        converged: j.converged,
    })
}

/// Density of `f mu_{s1} * g mu_{s2}` for different mass parameters, one of
/// which may be the cone.
pub fn mixed_conv_point(f: &RadialProfile, g: &RadialProfile, rho: f64, tau: f64, opts: &Adaptive) -> PointValue {
    let (s1, s2) = (f.s(), g.s());
    let prod = |t: f64| f.eval_height(t) * g.eval_height(tau - t);
    if rho == 0.0 {
        if !(tau > 0.0) {
            return PointValue::exact(0.0);
        }
        let diff = |t: f64| phi(s1, t) - phi(s2, tau - t);
        if diff(0.0) > 0.0 || diff(tau) < 0.0 {
            return PointValue::exact(0.0);
        }
        let t = bisect(diff, 0.0, tau);
        let slope = dphi(s1, t) + dphi(s2, tau - t);
        return PointValue::exact(4.0 * PI * prod(t) / slope);
    }
    let mut total = PointValue::exact(0.0);
    for (a, b) in mixed_windows(s1, s2, rho, tau) {
        let mut pts: Vec<f64> = f
            .heights()
            .iter()
            .copied()
            .chain(g.heights().iter().map(|t| tau - t))
            .collect();
        let pts = kinks(&mut pts, a, b);
        let j = slice_integral(prod, &pts, opts);
        total.value += j.value;
        total.error += j.error;
        total.converged &= j.converged;
    }
    PointValue {
        value: 2.0 * PI * total.value / rho,
        error: 2.0 * PI * total.error / rho,
        converged: total.converged,
    }
}

/// `mu_s * mu_s` from window lengths alone (unit profiles, no truncation).
pub fn measure_self_conv(s: f64, rho: f64, tau: f64) -> f64 {
    if rho == 0.0 {
        return if tau > 0.0 { 2.0 * PI * 2.0 * phi(s, 0.5 * tau) / tau } else { 0.0 };
    }
    self_window(s, rho, tau).map_or(0.0, |(lo, hi)| 2.0 * PI * 2.0 * (hi - lo) / rho)
}

/// A grid cell whose quadrature missed the tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct CellFailure {
    pub rho: f64,
    pub tau: f64,
    pub error: f64,
}

/// A computed field together with the cells that did not converge.
#[derive(Clone, Debug)]
pub struct ConvOutput {
    pub field: Conv2DField,
    pub failures: Vec<CellFailure>,
}

impl ConvOutput {
    pub fn converged(&self) -> bool {
        self.failures.is_empty()
    }
}

fn build(grid: &FieldGrid, cell: impl Fn(f64, f64) -> PointValue + Sync) -> Result<ConvOutput> {
    let rows: Vec<Vec<PointValue>> = grid
        .tau
        .par_iter()
        .map(|&t| grid.rho.iter().map(|&r| cell(r, t)).collect())
        .collect();
    let mut values = Vec::with_capacity(grid.cells());
    let mut failures = Vec::new();
    for (row, &t) in rows.iter().zip(&grid.tau) {
        for (p, &r) in row.iter().zip(&grid.rho) {
            values.push(p.value);
            if !p.converged {
                failures.push(CellFailure {
                    rho: r,
                    tau: t,
                    error: p.error,
                });
            }
        }
    }
    Ok(ConvOutput {
        field: Conv2DField::from_rows(grid, values)?,
        failures,
    })
}

/// `f mu_s * g mu_s` on a grid.
pub fn hyperbolic_conv(f: &RadialProfile, g: &RadialProfile, grid: &FieldGrid, quad: &QuadratureSpec) -> Result<ConvOutput> {
    check_mass(f, g)?;
    let opts = quad.adaptive();
    build(grid, |r, t| {
        self_conv_point(f, g, r, t, &opts).expect("mass checked above")
    })
}

/// `f_+ mu_+ * f_- mu_-` (upper sheet times lower sheet) on a grid.
pub fn cross_conv(fp: &RadialProfile, fm: &RadialProfile, grid: &FieldGrid, quad: &QuadratureSpec) -> Result<ConvOutput> {
    check_mass(fp, fm)?;
    let opts = quad.adaptive();
    build(grid, |r, t| {
        cross_conv_point(fp, fm, r, t, &opts).expect("mass checked above")
    })
}

/// `f mu_{s1} * g mu_{s2}` on a grid.
pub fn mixed_conv(f: &RadialProfile, g: &RadialProfile, grid: &FieldGrid, quad: &QuadratureSpec) -> Result<ConvOutput> {
    let opts = quad.adaptive();
    build(grid, |r, t| mixed_conv_point(f, g, r, t, &opts))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_limits() {
        let s = 1.0;
        let tau = 2.0;
        assert!(self_window(s, 0.0, tau).is_none());
        let (lo, hi) = self_window(s, phi(s, tau) - s, tau).unwrap();
        assert_eq!((lo, hi), (0.0, 1.0));
        assert!(self_window(s, phi(s, tau) + s, tau).is_none());
        let (lo, _) = self_window(s, phi(s, tau) + s - 1e-9, tau).unwrap();
        assert!((lo - 1.0).abs() < 1e-3);
    }

    #[test]
    fn half_offset_inverts_both_branches() {
        let s = 0.7;
        let tau = 1.9;
        for &x in &[0.1, 0.4, 0.9] {
            let d = phi(s, tau / 2.0 + x) - phi(s, tau / 2.0 - x);
            let m = phi(s, tau / 2.0 + x) + phi(s, tau / 2.0 - x);
            assert!((half_offset(s, d, tau) - x).abs() < 1e-12);
            assert!((half_offset(s, m, tau) - x).abs() < 1e-12);
        }
    }

    #[test]
    fn mixed_windows_match_equal_mass_geometry() {
        let s = 0.8;
        for &(rho, tau) in &[(0.3, 2.0), (1.9, 2.0), (2.5, 2.0), (2.9, 1.7)] {
            let len: f64 = mixed_windows(s, s, rho, tau).iter().map(|(a, b)| b - a).sum();
            let w = self_window(s, rho, tau).map_or(0.0, |(a, b)| 2.0 * (b - a));
            assert!((len - w).abs() < 1e-10, "{rho} {tau}: {len} vs {w}");
        }
    }
}

//! The trial-family integrals
//!
//! `I(a)  = 16 pi^3 int_0^inf e^{-a tau} g(tau) dtau`,
//! `II(a) = 16 pi^2 (int_0^inf e^{-a tau} sqrt(tau^2 + 1) dtau)^2`,
//!
//! with `g(tau) = tau^2 sqrt(tau^2+4) - (2/3)(tau^2+4) sqrt(tau^2+1) + 8/3 + 2 tau asinh(tau)`.

use std::f64::consts::PI;

use radial_core::quadrature::{integrate_breaks, GaussLegendre};
use radial_core::Adaptive;
use serde::Serialize;

use crate::{ComparisonError, Result};

/// Integration is carried to `TRUNCATION / a`; beyond it a polynomial
/// majorant bounds what is dropped.
pub const TRUNCATION: f64 = 200.0;

/// First panel end of the fixed composite rule; later ends double.
const FIRST_PANEL: f64 = 1e-3;

/// Gauss–Legendre order of the fixed rule and of its embedded check.
const PANEL_NODES: usize = 24;
const CHECK_NODES: usize = 16;

/// The cubature used for `I` and `II`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Method {
    /// Composite Gauss–Legendre on panels `[0, 1e-3, 2e-3, 4e-3, ...]`.
    /// The rule depends smoothly on `a`, which finite differences need.
    Panels,
    /// Adaptive Gauss–Kronrod on `[0, 1, 1/a, 10/a, 50/a, 200/a]`.
    Adaptive { rel_tol: f64 },
}

impl Default for Method {
    fn default() -> Self {
        Method::Panels
    }
}

/// A quadrature value with its error budget (rule error plus tail bound).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

/// `g(tau)`, the integrand of `I` without the exponential.
pub fn i_integrand(tau: f64) -> f64 {
    let t2 = tau * tau;
    t2 * (t2 + 4.0).sqrt() - 2.0 / 3.0 * (t2 + 4.0) * (t2 + 1.0).sqrt() + 8.0 / 3.0 + 2.0 * tau * tau.asinh()
}

/// `sqrt(tau^2 + 1)`, the integrand of `II` without the exponential.
pub fn ii_integrand(tau: f64) -> f64 {
    tau.hypot(1.0)
}

fn check_a(a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(ComparisonError::Domain(format!("decay rate a = {a} must be positive and finite")))
    }
}

fn panel_ends(a: f64) -> Vec<f64> {
    let end = TRUNCATION / a;
    let mut pts = vec![0.0];
    let mut x = FIRST_PANEL;
    while x < end {
        pts.push(x);
        x *= 2.0;
    }
    pts.push(end);
    pts
}

/// `int_T^inf e^{-a tau} (tau + c)^3 dtau`.
fn cubic_tail(a: f64, t: f64, c: f64) -> f64 {
    let x = t + c;
    (-a * t).exp() * (x.powi(3) / a + 3.0 * x * x / a.powi(2) + 6.0 * x / a.powi(3) + 6.0 / a.powi(4))
}

/// `int_T^inf e^{-a tau} (tau + 1) dtau`.
fn linear_tail(a: f64, t: f64) -> f64 {
    (-a * t).exp() * ((t + 1.0) / a + 1.0 / (a * a))
}

/// `int_0^inf e^{-a tau} f(tau) dtau` truncated at `TRUNCATION / a`.
fn laplace(a: f64, f: impl Fn(f64) -> f64, tail: f64, method: &Method) -> Estimate {
    let weighted = |t: f64| (-a * t).exp() * f(t);
    match *method {
        Method::Panels => {
            let pts = panel_ends(a);
            let v = GaussLegendre::new(PANEL_NODES).composite(&pts, weighted);
            let w = GaussLegendre::new(CHECK_NODES).composite(&pts, weighted);
            Estimate { value: v, error: (v - w).abs() + tail, converged: v.is_finite() }
        }
        Method::Adaptive { rel_tol } => {
            let end = TRUNCATION / a;
            let mut pts: Vec<f64> = [0.0, 1.0, 1.0 / a, 10.0 / a, 50.0 / a, end]
                .into_iter()
                .filter(|&x| x <= end)
                .collect();
            pts.sort_by(f64::total_cmp);
            pts.dedup();
            let r = integrate_breaks(weighted, &pts, &Adaptive::rel(rel_tol).with_abs(1e-300));
            Estimate { value: r.value, error: r.error + tail, converged: r.converged }
        }
    }
}

/// `I(a)`. The dropped tail is bounded with `g(tau) <= (tau + 2)^3`.
pub fn i_of_a(a: f64, method: &Method) -> Result<Estimate> {
    check_a(a)?;
    let k = 16.0 * PI.powi(3);
    let e = laplace(a, i_integrand, cubic_tail(a, TRUNCATION / a, 2.0), method);
    Ok(Estimate { value: k * e.value, error: k * e.error, ..e })
}

/// `int_0^inf e^{-a tau} sqrt(tau^2 + 1) dtau`, i.e. `||f_a||^2 / (4 pi)`.
pub fn ii_root(a: f64, method: &Method) -> Result<Estimate> {
    check_a(a)?;
    Ok(laplace(a, ii_integrand, linear_tail(a, TRUNCATION / a), method))
}

/// `II(a)`.
pub fn ii_of_a(a: f64, method: &Method) -> Result<Estimate> {
    let j = ii_root(a, method)?;
    let k = 16.0 * PI * PI;
    Ok(Estimate {
        value: k * j.value * j.value,
        error: k * (2.0 * j.value * j.error + j.error * j.error),
        converged: j.converged,
    })
}

/// `I(a) / II(a)` with a propagated error.
pub fn ratio(a: f64, method: &Method) -> Result<Estimate> {
    let (i, ii) = (i_of_a(a, method)?, ii_of_a(a, method)?);
    let value = i.value / ii.value;
    Ok(Estimate {
        value,
        error: value * (i.error / i.value + ii.error / ii.value),
        converged: i.converged && ii.converged,
    })
}

/// `N(a) = a^{4/3} I(a^{1/3})`.
pub fn n_of_a(a: f64, method: &Method) -> Result<Estimate> {
    check_a(a)?;
    let i = i_of_a(a.cbrt(), method)?;
    let k = a.powf(4.0 / 3.0);
    Ok(Estimate { value: k * i.value, error: k * i.error, converged: i.converged })
}

/// `D(a) = a^{4/3} II(a^{1/3})`.
pub fn d_of_a(a: f64, method: &Method) -> Result<Estimate> {
    check_a(a)?;
    let ii = ii_of_a(a.cbrt(), method)?;
    let k = a.powf(4.0 / 3.0);
    Ok(Estimate { value: k * ii.value, error: k * ii.error, converged: ii.converged })
}

pub(crate) fn nonconverged(what: &str, a: f64) -> ComparisonError {
    ComparisonError::NonConvergence(format!("{what} at a = {a}"))
}

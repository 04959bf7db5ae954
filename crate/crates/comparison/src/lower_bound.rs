//! The lower-bound chain for `||f_a mu * f_a mu||_2^2`.
//!
//! Keeping only the inner and middle branches of the exact density and
//! integrating its square against `e^{-a tau}` reproduces `I(a)`; the full
//! density gives the true norm, which must dominate it.

use std::f64::consts::PI;

use closed_forms::{exp_weighted_conv, mu_self_conv_inner_middle, ConvPoint};
use radial_core::quadrature::integrate_breaks;
use radial_core::Adaptive;
use serde::Serialize;

use crate::integrals::{i_of_a, Method, TRUNCATION};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LowerBoundChain {
    pub a: f64,
    /// `int e^{-a tau} (masked density)^2 dxi dtau`.
    pub masked: f64,
    /// `||f_a mu * f_a mu||_2^2` from the full density.
    pub full: f64,
    pub i_of_a: f64,
    pub converged: bool,
}

impl LowerBoundChain {
    pub fn masked_matches_i(&self, rel: f64) -> bool {
        (self.masked - self.i_of_a).abs() <= rel * self.i_of_a
    }

    pub fn holds(&self) -> bool {
        self.full >= self.masked
    }
}

fn norm_sq(a: f64, density: impl Fn(f64, f64) -> f64, rel_tol: f64) -> (f64, bool) {
    let inner_opts = Adaptive::rel(rel_tol * 0.1).with_abs(1e-300);
    let mut converged = true;
    let slice = |tau: f64, ok: &mut bool| {
        let probe = ConvPoint::new(1.0, 0.0, tau).expect("finite point");
        let [b1, b2, b3] = probe.self_boundaries();
        let r = integrate_breaks(|rho| 4.0 * PI * rho * rho * density(rho, tau).powi(2), &[0.0, b1, b2, b3], &inner_opts);
        *ok &= r.converged;
        r.value
    };
    let end = TRUNCATION / a;
    let mut pts: Vec<f64> = [0.0, 1.0, 1.0 / a, 10.0 / a, 50.0 / a, end].into_iter().filter(|&x| x <= end).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let r = integrate_breaks(|tau| slice(tau, &mut converged), &pts, &Adaptive::rel(rel_tol).with_abs(1e-300));
    (r.value, converged && r.converged)
}

pub fn lower_bound_chain(a: f64, rel_tol: f64) -> Result<LowerBoundChain> {
    let i = i_of_a(a, &Method::Panels)?;
    let weight = |tau: f64| (-0.5 * a * tau).exp();
    let point = |rho: f64, tau: f64| ConvPoint::new(1.0, rho, tau).expect("finite point");
    let (masked, ok_m) = norm_sq(a, |rho, tau| weight(tau) * mu_self_conv_inner_middle(&point(rho, tau)), rel_tol);
    let (full, ok_f) = norm_sq(
        a,
        |rho, tau| exp_weighted_conv(a, &point(rho, tau)).expect("positive rate"),
        rel_tol,
    );
    Ok(LowerBoundChain { a, masked, full, i_of_a: i.value, converged: ok_m && ok_f && i.converged })
}

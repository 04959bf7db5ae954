//! Nodal `L^2(mu_s)` norm: `sum_i w_i |f_i|^2` with `w_i` the `mu_s`-mass of
//! the i-th hat function of the profile's interpolation.

use std::f64::consts::PI;

use radial_core::quadrature::integrate;
use radial_core::{phi, Adaptive, RadialProfile, Sample};

/// Weights `w_i = int hat_i dmu_s`; they sum to the `mu_s`-mass of the support.
pub fn nodal_weights<V: Sample>(f: &RadialProfile<V>) -> Vec<f64> {
    let s = f.s();
    let (r, t) = (f.radii(), f.heights());
    let opts = Adaptive::rel(1e-14).with_abs(1e-300);
    let mut w = vec![0.0; r.len()];
    for i in 0..r.len() - 1 {
        let dr = r[i + 1] - r[i];
        let right = integrate(|u: f64| (phi(s, u) - r[i]) / dr * phi(s, u), t[i], t[i + 1], &opts).value;
        let total = integrate(|u: f64| phi(s, u), t[i], t[i + 1], &opts).value;
        w[i] += 4.0 * PI * (total - right);
        w[i + 1] += 4.0 * PI * right;
    }
    w
}

pub fn nodal_norm_sq<V: Sample>(f: &RadialProfile<V>) -> f64 {
    nodal_weights(f)
        .iter()
        .zip(f.values())
        .map(|(w, v)| w * v.abs2())
        .sum()
}

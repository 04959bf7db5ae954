use std::f64::consts::PI;

use radial_core::quadrature::{integrate, integrate_to_infinity};
use radial_core::{phi, Adaptive, QuadratureSpec};
use serde::Serialize;

use crate::spacetime::{boost, BoostParam, Rotation, SpaceTimePoint};

/// `exp(-(|x - x0|^2 + (t - t0)^2) / w^2)` on `R^4`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GaussianTest {
    pub center: SpaceTimePoint,
    pub width: f64,
}

impl GaussianTest {
    pub fn eval(&self, p: &SpaceTimePoint) -> f64 {
        let c = &self.center;
        let d2 = (0..3).map(|i| (p.x[i] - c.x[i]).powi(2)).sum::<f64>() + (p.t - c.t).powi(2);
        (-d2 / (self.width * self.width)).exp()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InvarianceReport {
    /// `int f d(mu_bar)`.
    pub lhs: f64,
    /// `int f o L d(mu_bar)`.
    pub rhs: f64,
    pub rel_err: f64,
    pub converged: bool,
}

const AZIMUTHS: usize = 96;

/// `int g d(mu_bar_s)` over both sheets in the chart `u = |t|`, where
/// `d(mu_bar_s) = phi_s(u) du d(omega)`: adaptive in `u` and in the polar
/// cosine, trapezoidal in the azimuth.
pub fn sheet_integral(g: impl Fn(&SpaceTimePoint) -> f64, s: f64, opts: &Adaptive) -> (f64, bool) {
    let inner = Adaptive { rel_tol: opts.rel_tol * 0.1, ..*opts };
    let mut ok = true;
    let mut total = 0.0;
    for sign in [1.0, -1.0] {
        let outer = integrate_to_infinity(
            |u| {
                let r = phi(s, u);
                let polar = integrate(
                    |z: f64| {
                        let q = ((1.0 - z) * (1.0 + z)).max(0.0).sqrt();
                        let mut acc = 0.0;
                        for m in 0..AZIMUTHS {
                            let a = 2.0 * PI * m as f64 / AZIMUTHS as f64;
                            let p = SpaceTimePoint::new([r * z, r * q * a.cos(), r * q * a.sin()], sign * u);
                            acc += g(&p);
                        }
                        acc * 2.0 * PI / AZIMUTHS as f64
                    },
                    -1.0,
                    1.0,
                    &inner,
                );
                ok &= polar.converged;
                polar.value * r
            },
            0.0,
            opts,
        );
        ok &= outer.converged;
        total += outer.value;
    }
    (total, ok)
}

/// Compares `int f d(mu_bar_s)` with `int f o map d(mu_bar_s)`.
pub fn invariance_under(
    test: &GaussianTest,
    map: impl Fn(&SpaceTimePoint) -> SpaceTimePoint,
    s: f64,
    quad: &QuadratureSpec,
) -> InvarianceReport {
    let opts = Adaptive { rel_tol: quad.rel_tol, abs_tol: 0.0, max_depth: quad.max_depth };
    let (lhs, ok_l) = sheet_integral(|p| test.eval(p), s, &opts);
    let (rhs, ok_r) = sheet_integral(|p| test.eval(&map(p)), s, &opts);
    InvarianceReport { lhs, rhs, rel_err: (lhs - rhs).abs() / lhs.abs(), converged: ok_l && ok_r }
}

/// Numerical check that the boost `L^t` preserves `mu_bar_s`.
pub fn lorentz_invariance_check(test: &GaussianTest, bp: &BoostParam, s: f64, quad: &QuadratureSpec) -> InvarianceReport {
    invariance_under(test, |p| boost(bp, p, false), s, quad)
}

/// The same check for a spatial rotation.
pub fn rotation_invariance_check(test: &GaussianTest, rot: &Rotation, s: f64, quad: &QuadratureSpec) -> InvarianceReport {
    invariance_under(test, |p| rot.on_point(p), s, quad)
}

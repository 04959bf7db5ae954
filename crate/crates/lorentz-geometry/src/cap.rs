use std::f64::consts::PI;

use radial_core::{psi, Real};
use rayon::prelude::*;
use serde::Serialize;

use crate::spacetime::{inverse_boost, minkowski_form, norm, BoostParam, Rotation, SpaceTimePoint};
use crate::{LorentzError, Result};

/// Cap `[a, b] x C(axis, eps)` of the upper sheet of `H^3_s`: points
/// `(r w, psi_s(r))` with `a <= r <= b` and `w` within angle `eps` of `axis`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CapSpec<T = f64> {
    pub s: T,
    pub a: T,
    pub b: T,
    pub axis: [T; 3],
    pub eps: T,
}

impl<T: Real> CapSpec<T> {
    pub fn new(s: T, a: T, b: T, axis: [T; 3], eps: T) -> Result<Self> {
        let bad = |m: String| Err(LorentzError::Cap(m));
        if !(s >= T::zero()) || !s.is_finite() {
            return bad(format!("mass parameter {s}"));
        }
        if !(s <= a && a < b) {
            return bad(format!("radial bounds must satisfy s <= a < b (s = {s}, a = {a}, b = {b})"));
        }
        if !(eps >= T::zero() && eps <= T::PI()) {
            return bad(format!("half-angle {eps} outside [0, pi]"));
        }
        let n = norm(axis);
        if !(n > T::zero()) || !n.is_finite() {
            return bad("cap axis must be a nonzero finite vector".into());
        }
        Ok(Self { s, a, b, axis: axis.map(|v| v / n), eps })
    }

    /// The dyadic cap `[s 2^k, s 2^{k+1}] x C(axis, eps)`.
    pub fn dyadic(s: T, k: i32, axis: [T; 3], eps: T) -> Result<Self> {
        let a = s * T::lit(2.0).powi(k);
        Self::new(s, a, a + a, axis, eps)
    }

    /// `Some(k)` when the cap is dyadic.
    pub fn dyadic_index(&self) -> Option<i32> {
        if self.s <= T::zero() || self.b != self.a + self.a {
            return None;
        }
        let k = (self.a / self.s).log2().round();
        let k = k.to_i32()?;
        (self.s * T::lit(2.0).powi(k) == self.a).then_some(k)
    }

    /// The rescaled cap `l C`, which lives on `H^3_{l s}`.
    pub fn rescaled(&self, l: T) -> Self {
        Self { s: self.s * l, a: self.a * l, b: self.b * l, ..*self }
    }

    /// Area of the spherical cap, `2 pi (1 - cos eps)`.
    pub fn spherical_area(&self) -> T {
        let h = (self.eps / T::lit(2.0)).sin();
        T::lit(4.0) * T::PI() * h * h
    }
}

/// `mu_s` of a cap: `(sigma / 2) (s^2 ln(r + psi_s(r)) + r psi_s(r))` between
/// `a` and `b`, with `sigma` the spherical area.
pub fn cap_measure<T: Real>(c: &CapSpec<T>) -> Result<T> {
    if !c.b.is_finite() {
        return Err(LorentzError::Cap("cap measure needs a finite outer radius".into()));
    }
    let (s, a, b) = (c.s, c.a, c.b);
    let (pa, pb) = (psi(s, a), psi(s, b));
    let log_part = if s == T::zero() { T::zero() } else { s * s * ((b + pb) / (a + pa)).ln() };
    let radial = log_part + b * pb - a * pa;
    Ok(c.spherical_area() / T::lit(2.0) * radial)
}

/// Exact measure of a dyadic cap against its leading asymptote.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DyadicAsymptotics {
    pub exact: f64,
    pub asymptote: f64,
    /// `exact / asymptote`; `None` for a degenerate cap where both vanish.
    pub ratio: Option<f64>,
}

/// Measure of `[s 2^k, s 2^{k+1}] x C(eps)` and `3 pi s^2 2^{2k} (1 - cos eps)`.
pub fn dyadic_cap_asymptotics(s: f64, k: i32, eps: f64) -> Result<DyadicAsymptotics> {
    if k < 0 {
        return Err(LorentzError::Cap(format!("dyadic index {k} must be nonnegative")));
    }
    let cap = CapSpec::dyadic(s, k, [1.0, 0.0, 0.0], eps)?;
    let exact = cap_measure(&cap)?;
    let one_minus_cos = 2.0 * (eps / 2.0).sin().powi(2);
    let asymptote = 3.0 * PI * s * s * 4f64.powi(k) * one_minus_cos;
    let ratio = (asymptote > 0.0).then(|| exact / asymptote);
    Ok(DyadicAsymptotics { exact, asymptote, ratio })
}

/// `ln((2^{k+1} + sqrt(2^{2(k+1)} - 1)) / (2^k + sqrt(2^{2k} - 1)))`, which
/// tends to `ln 2`.
pub fn dyadic_log_term(k: i32) -> f64 {
    let f = |m: f64| m + ((m - 1.0) * (m + 1.0)).sqrt();
    let m = 2f64.powi(k);
    (f(2.0 * m) / f(m)).ln()
}

/// A hypothesis of the cap normalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Hypothesis {
    /// `s <= 1/2`.
    MassParameter,
    /// `eps in [0, pi/2]`.
    AngleRange,
    /// `sin^2 eps >= 8 s^2`.
    Thinness,
    /// Radial range exactly `[1, 2]`.
    RadialRange,
    /// `eps > 0`, so that the boost stays below the speed of light.
    NonDegenerate,
}

#[derive(Clone, Debug, PartialEq, Serialize, thiserror::Error)]
#[error("cap normalization rejected: failed {failed:?}")]
pub struct CapRejection {
    pub failed: Vec<Hypothesis>,
}

/// Outcome of [`normalize_cap`] with its two certificates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalizedCap {
    pub boost: BoostParam,
    /// Mass parameter `s / (1 - t^2)^{1/2}` of the image.
    pub image_s: f64,
    /// `mu` of the image, `mu_s(C) / (1 - t^2)`, from the exact formula.
    pub image_measure: f64,
    /// `pi / (1 + cos eps)` when boosting, `pi (1 - cos eps)` otherwise.
    pub measure_witness: f64,
    pub measure_pass: bool,
    /// Extremes of `|x|` over the sampled image.
    pub radius_min: f64,
    pub radius_max: f64,
    pub range_pass: bool,
    /// Largest `|B(p, p) + image_s^2|` over the sampled image.
    pub sheet_residual: f64,
    pub samples: usize,
    pub pass: bool,
}

pub const NORMALIZED_RANGE: (f64, f64) = (7.0 / 16.0, 33.0 / 16.0);
const CERT_GRID: usize = 64;
const CERT_AZIMUTHS: usize = 8;

/// Boosts a thin cap on `[1, 2]` into a cap of measure at least `pi / 2`
/// whose spatial radii lie in `[7/16, 33/16]`.
///
/// The boost is `t = cos eps` for `eps <= pi/3` and `t = 0` beyond. The
/// measure certificate is exact; the range certificate samples a
/// 64 x 64 grid in `(r, phi)` at 8 azimuths, including the whole boundary.
/// Radius and height of the image depend monotonically on `phi` and are
/// smooth in `r`, so the extremes sit on the sampled boundary curves.
pub fn normalize_cap(c: &CapSpec) -> std::result::Result<NormalizedCap, CapRejection> {
    let mut failed = Vec::new();
    if !(c.s <= 0.5) {
        failed.push(Hypothesis::MassParameter);
    }
    if !(c.eps <= PI / 2.0) {
        failed.push(Hypothesis::AngleRange);
    }
    if !(c.eps.sin().powi(2) >= 8.0 * c.s * c.s) {
        failed.push(Hypothesis::Thinness);
    }
    if c.a != 1.0 || c.b != 2.0 {
        failed.push(Hypothesis::RadialRange);
    }
    if !(c.eps > 0.0) {
        failed.push(Hypothesis::NonDegenerate);
    }
    if !failed.is_empty() {
        return Err(CapRejection { failed });
    }

    let t = if c.eps <= PI / 3.0 { c.eps.cos() } else { 0.0 };
    let boost = BoostParam::along(t, c.axis).expect("t = cos eps < 1 for eps > 0");
    let contraction2 = if t == 0.0 { 1.0 } else { c.eps.sin().powi(2) };
    let image_s = c.s / contraction2.sqrt();
    let measure = cap_measure(c).expect("finite cap");
    let image_measure = measure / contraction2;
    let one_minus_cos = 2.0 * (c.eps / 2.0).sin().powi(2);
    let measure_witness = if t == 0.0 { PI * one_minus_cos } else { PI / (1.0 + c.eps.cos()) };
    let measure_pass = image_measure >= PI / 2.0 && image_measure >= measure_witness * (1.0 - 1e-12);

    let rot = Rotation::taking_e1_to(c.axis);
    let rows: Vec<(f64, f64, f64)> = (0..CERT_GRID)
        .into_par_iter()
        .map(|i| {
            let r = c.a + (c.b - c.a) * i as f64 / (CERT_GRID - 1) as f64;
            let mut acc = (f64::INFINITY, 0.0f64, 0.0f64);
            for j in 0..CERT_GRID {
                let phi = c.eps * j as f64 / (CERT_GRID - 1) as f64;
                for m in 0..CERT_AZIMUTHS {
                    let theta = 2.0 * PI * m as f64 / CERT_AZIMUTHS as f64;
                    let local = [r * phi.cos(), r * phi.sin() * theta.cos(), r * phi.sin() * theta.sin()];
                    let p = SpaceTimePoint::new(rot.apply(local), psi(c.s, r));
                    let q = inverse_boost(&boost, &p, true);
                    let rad = q.spatial_norm();
                    let resid = (minkowski_form(&q, &q) + image_s * image_s).abs();
                    acc = (acc.0.min(rad), acc.1.max(rad), acc.2.max(resid));
                }
            }
            acc
        })
        .collect();
    let radius_min = rows.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let radius_max = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let sheet_residual = rows.iter().map(|r| r.2).fold(0.0, f64::max);
    let range_pass = radius_min >= NORMALIZED_RANGE.0 && radius_max <= NORMALIZED_RANGE.1;
    Ok(NormalizedCap {
        boost,
        image_s,
        image_measure,
        measure_witness,
        measure_pass,
        radius_min,
        radius_max,
        range_pass,
        sheet_residual,
        samples: CERT_GRID * CERT_GRID * CERT_AZIMUTHS,
        pass: measure_pass && range_pass,
    })
}

/// Empirical constant `C` with `max |x| <= C (s + mu/s + mu^{1/2})` over the
/// boosted dyadic caps; the supremum over `k <= 24` and `eps in [0, pi/2]`
/// is attained at `k = 0`, `eps = 0`, `r = s`, where the radius is `2s`.
pub const BALL_CONSTANT: f64 = 2.0;

/// Sampled extent of a boosted dyadic cap.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BallCertificate {
    pub boost_t: f64,
    pub measure: f64,
    /// Largest sampled `|x|`.
    pub radius: f64,
    /// `BALL_CONSTANT (s + mu/s + mu^{1/2})`.
    pub radius_bound: f64,
    pub max_first: f64,
    /// `2^{2(k+1)} s (1 - cos eps) + s`; fails near `r = s 2^k` for small `eps`.
    pub first_bound_stated: f64,
    /// `2^{2(k+1)} s (1 - cos eps) + 2s`, which holds for all samples.
    pub first_bound: f64,
    pub max_transverse: f64,
    /// `2^{k+1} s sin eps`.
    pub transverse_bound: f64,
    pub pass: bool,
}

const BALL_GRID: usize = 257;

/// Boosts `[s 2^k, s 2^{k+1}] x C(eps)` by `L^{-t}` with
/// `t = (1 - 2^{-2(k+1)})^{1/2}` and bounds the spatial radius of the image.
pub fn bounded_ball_certificate(s: f64, k: i32, eps: f64) -> Result<BallCertificate> {
    if !(s > 0.0) {
        return Err(LorentzError::Cap(format!("mass parameter {s} must be positive")));
    }
    if !(0.0..=PI / 2.0).contains(&eps) {
        return Err(LorentzError::Cap(format!("half-angle {eps} outside [0, pi/2]")));
    }
    let cap = CapSpec::dyadic(s, k, [1.0, 0.0, 0.0], eps)?;
    let measure = cap_measure(&cap)?;
    let gamma = 2f64.powi(k + 1);
    let c = 1.0 / gamma;
    let t = ((1.0 - c) * (1.0 + c)).sqrt();
    let (max_first, max_transverse, radius) = (0..BALL_GRID)
        .into_par_iter()
        .map(|i| {
            let r = cap.a + (cap.b - cap.a) * i as f64 / (BALL_GRID - 1) as f64;
            let p = psi(s, r);
            // r - t psi = (r^2 (1 - t^2) + t^2 s^2) / (r + t psi), free of cancellation
            let lag = (r * r * c * c + t * t * s * s) / (r + t * p);
            let mut acc = (0.0f64, 0.0f64, 0.0f64);
            for j in 0..BALL_GRID {
                let phi = eps * j as f64 / (BALL_GRID - 1) as f64;
                let versine = 2.0 * (phi / 2.0).sin().powi(2);
                let first = gamma * (lag - r * versine);
                let trans = r * phi.sin();
                acc = (acc.0.max(first.abs()), acc.1.max(trans), acc.2.max(first.hypot(trans)));
            }
            acc
        })
        .reduce(|| (0.0, 0.0, 0.0), |x, y| (x.0.max(y.0), x.1.max(y.1), x.2.max(y.2)));
    let versine = 2.0 * (eps / 2.0).sin().powi(2);
    let first_bound_stated = gamma * gamma * s * versine + s;
    let first_bound = first_bound_stated + s;
    let transverse_bound = gamma * s * eps.sin();
    let radius_bound = BALL_CONSTANT * (s + measure / s + measure.sqrt());
    let slack = 1.0 + 1e-12;
    let pass = radius <= radius_bound * slack
        && max_first <= first_bound * slack
        && max_transverse <= transverse_bound * slack;
    Ok(BallCertificate {
        boost_t: t,
        measure,
        radius,
        radius_bound,
        max_first,
        first_bound_stated,
        first_bound,
        max_transverse,
        transverse_bound,
        pass,
    })
}

/// Largest `radius / (s + mu/s + mu^{1/2})` over `k in 0..=k_max` and
/// `n_eps` half-angles in `[0, pi/2]`, with the maximizing `(k, eps)`.
pub fn calibrate_ball_constant(k_max: i32, n_eps: usize) -> (f64, i32, f64) {
    let mut best = (0.0, 0, 0.0);
    for k in 0..=k_max {
        for j in 0..n_eps.max(2) {
            let eps = PI / 2.0 * j as f64 / (n_eps.max(2) - 1) as f64;
            let cert = bounded_ball_certificate(1.0, k, eps).expect("valid dyadic cap");
            let q = cert.radius / (1.0 + cert.measure + cert.measure.sqrt());
            if q > best.0 {
                best = (q, k, eps);
            }
        }
    }
    best
}

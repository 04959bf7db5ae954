//! Limits of `I/II` and of `d/da (N/D)` as `a -> 0+`.
//!
//! Derivatives are Richardson-extrapolated central differences with steps
//! proportional to `a`. Values along a geometric schedule of rates are then
//! extrapolated to `a = 0` by least squares on `{1, a L^2, a L, a, a^2 L, a^2}`,
//! `L = ln a`; the error bar is the shift of the intercept when the last basis
//! function is dropped.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::integrals::{nonconverged, ratio, Method};
use crate::{ComparisonError, Result};

/// Rates at which derivatives are sampled, and the difference steps.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Schedule {
    pub a_min: f64,
    pub a_max: f64,
    pub points: usize,
    /// Coarsest step as a fraction of `a`; finer levels halve it.
    pub step: f64,
    pub levels: usize,
}

impl Default for Schedule {
    fn default() -> Self {
        Self { a_min: 0.003, a_max: 0.06, points: 12, step: 0.25, levels: 3 }
    }
}

impl Schedule {
    pub fn rates(&self) -> Vec<f64> {
        let q = (self.a_max / self.a_min).ln();
        (0..self.points)
            .map(|k| self.a_min * (q * k as f64 / (self.points - 1) as f64).exp())
            .collect()
    }

    fn validate(&self) -> Result<()> {
        let ok = self.a_min > 0.0
            && self.a_max > self.a_min
            && self.points >= 7
            && self.step > 0.0
            && self.step <= 0.25
            && (1..=6).contains(&self.levels);
        if ok {
            Ok(())
        } else {
            Err(ComparisonError::Domain(format!("bad derivative schedule {self:?}")))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitEstimate {
    pub name: String,
    pub target: f64,
    pub estimate: f64,
    pub error: f64,
    /// Finest two Richardson levels agree to `1e-3` (relative, floor 1) everywhere.
    pub stabilized: bool,
    /// `(a, value)` along the schedule.
    pub samples: Vec<(f64, f64)>,
}

impl LimitEstimate {
    pub fn abs_error(&self) -> f64 {
        (self.estimate - self.target).abs()
    }

    pub fn rel_error(&self) -> f64 {
        self.abs_error() / self.target.abs()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitReport {
    pub schedule: Schedule,
    /// `I/II -> 2 pi`, then its first three derivatives `-> 0, 0, 8 pi`.
    pub ratio: [LimitEstimate; 4],
    /// `d/da (N/D) -> 4 pi / 3`.
    pub nd_derivative: LimitEstimate,
}

/// Central difference of order `k` (1..=3) with step `h`.
fn central(f: &impl Fn(f64) -> Result<f64>, a: f64, h: f64, k: usize) -> Result<f64> {
    Ok(match k {
        1 => (f(a + h)? - f(a - h)?) / (2.0 * h),
        2 => (f(a + h)? - 2.0 * f(a)? + f(a - h)?) / (h * h),
        3 => (f(a + 2.0 * h)? - 2.0 * f(a + h)? + 2.0 * f(a - h)? - f(a - 2.0 * h)?) / (2.0 * h.powi(3)),
        _ => unreachable!("derivative order {k}"),
    })
}

/// Richardson table for a central difference; returns the extrapolated value
/// and whether the finest two levels agree.
pub fn richardson(f: &impl Fn(f64) -> Result<f64>, a: f64, h: f64, k: usize, levels: usize) -> Result<(f64, bool)> {
    let mut row: Vec<f64> = (0..levels)
        .map(|l| central(f, a, h / 2f64.powi(l as i32), k))
        .collect::<Result<_>>()?;
    let mut prev_best = row[0];
    let mut factor = 4.0;
    while row.len() > 1 {
        prev_best = *row.last().unwrap();
        row = row.windows(2).map(|w| w[1] + (w[1] - w[0]) / (factor - 1.0)).collect();
        factor *= 4.0;
    }
    let best = row[0];
    let stable = (best - prev_best).abs() <= 1e-3 * best.abs().max(1.0);
    Ok((best, stable))
}

fn basis(a: f64, cols: usize) -> Vec<f64> {
    let l = a.ln();
    [1.0, a * l * l, a * l, a, a * a * l, a * a][..cols].to_vec()
}

fn intercept(samples: &[(f64, f64)], cols: usize) -> f64 {
    let m = DMatrix::from_fn(samples.len(), cols, |i, j| basis(samples[i].0, cols)[j]);
    let y = DVector::from_iterator(samples.len(), samples.iter().map(|s| s.1));
    m.svd(true, true).solve(&y, 1e-14).expect("full SVD computed")[0]
}

/// Least-squares extrapolation of `samples` to `a = 0` with a model error bar.
pub fn extrapolate_to_zero(samples: &[(f64, f64)]) -> (f64, f64) {
    let full = intercept(samples, 6);
    (full, (full - intercept(samples, 5)).abs())
}

fn estimate(name: &str, target: f64, samples: Vec<(f64, f64)>, stabilized: bool) -> LimitEstimate {
    let (estimate, error) = extrapolate_to_zero(&samples);
    LimitEstimate { name: name.into(), target, estimate, error, stabilized, samples }
}

fn ratio_value(method: &Method) -> impl Fn(f64) -> Result<f64> + '_ {
    move |a| {
        let r = ratio(a, method)?;
        if r.converged {
            Ok(r.value)
        } else {
            Err(nonconverged("I/II", a))
        }
    }
}

/// `d/da (N/D)` at `a`, where `N/D (a) = (I/II)(a^{1/3})`.
pub fn nd_derivative_at(a: f64, schedule: &Schedule, method: &Method) -> Result<(f64, bool)> {
    let r = ratio_value(method);
    let q = |x: f64| r(x.cbrt());
    richardson(&q, a, schedule.step * a, 1, schedule.levels)
}

pub fn derivative_limits(schedule: &Schedule, method: &Method) -> Result<LimitReport> {
    schedule.validate()?;
    let rates = schedule.rates();
    let r = ratio_value(method);
    // per rate: value, three derivatives, N/D derivative at a^3, stability flags
    let rows = rates
        .par_iter()
        .map(|&a| -> Result<([f64; 5], bool)> {
            let mut out = [r(a)?, 0.0, 0.0, 0.0, 0.0];
            let mut stable = true;
            for k in 1..=3 {
                let (d, ok) = richardson(&r, a, schedule.step * a, k, schedule.levels)?;
                out[k] = d;
                stable &= ok;
            }
            let (d, ok) = nd_derivative_at(a.powi(3), schedule, method)?;
            out[4] = d;
            Ok((out, stable && ok))
        })
        .collect::<Result<Vec<_>>>()?;
    let stable = rows.iter().all(|r| r.1);
    let column = |j: usize| rates.iter().zip(&rows).map(|(&a, r)| (a, r.0[j])).collect::<Vec<_>>();
    let ratio = [
        estimate("I/II", 2.0 * PI, column(0), stable),
        estimate("d/da I/II", 0.0, column(1), stable),
        estimate("d2/da2 I/II", 0.0, column(2), stable),
        estimate("d3/da3 I/II", 8.0 * PI, column(3), stable),
    ];
    // N/D is sampled at a^3 and extrapolated in the variable a = (a^3)^{1/3}
    let nd_derivative = estimate("d/da N/D", 4.0 * PI / 3.0, column(4), stable);
    Ok(LimitReport { schedule: schedule.clone(), ratio, nd_derivative })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn richardson_differentiates_polynomials_exactly() {
        let f = |x: f64| Ok(x.powi(5) - 2.0 * x.powi(3) + x);
        let a = 0.7;
        let (d1, _) = richardson(&f, a, 0.1, 1, 3).unwrap();
        let (d3, _) = richardson(&f, a, 0.1, 3, 3).unwrap();
        assert!((d1 - (5.0 * a.powi(4) - 6.0 * a * a + 1.0)).abs() < 1e-12);
        assert!((d3 - (60.0 * a * a - 12.0)).abs() < 1e-8);
    }

    #[test]
    fn extrapolation_recovers_the_intercept_of_the_model() {
        let f = |a: f64| 3.0 + 0.5 * a * a.ln().powi(2) - 2.0 * a + 7.0 * a * a * a.ln();
        let samples: Vec<_> = Schedule::default().rates().into_iter().map(|a| (a, f(a))).collect();
        let (c, err) = extrapolate_to_zero(&samples);
        assert!((c - 3.0).abs() < 1e-9, "{c}");
        assert!(err < 1e-6);
    }

    #[test]
    fn schedule_is_geometric() {
        let r = Schedule::default().rates();
        assert_eq!(r.len(), 12);
        assert!((r[0] - 0.003).abs() < 1e-15 && (r[11] - 0.06).abs() < 1e-15);
        let q = r[1] / r[0];
        assert!(r.windows(2).all(|w| (w[1] / w[0] - q).abs() < 1e-12));
        assert!(Schedule { points: 3, ..Schedule::default() }.validate().is_err());
    }
}

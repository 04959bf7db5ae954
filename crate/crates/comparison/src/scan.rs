use std::f64::consts::PI;
use std::io::Write;

use radial_core::field::fmt17;
use rayon::prelude::*;
use serde::Serialize;

use crate::integrals::{i_of_a, ii_of_a, nonconverged, Method};
use crate::{ComparisonError, Result};

/// One row of the ratio scan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RatioSample {
    pub a: f64,
    pub i: f64,
    pub ii: f64,
    pub ratio: f64,
    pub i_err: f64,
    pub ii_err: f64,
}

impl RatioSample {
    pub fn at(a: f64, method: &Method) -> Result<Self> {
        let (i, ii) = (i_of_a(a, method)?, ii_of_a(a, method)?);
        if !(i.converged && ii.converged) {
            return Err(nonconverged("I/II quadrature", a));
        }
        Ok(Self { a, i: i.value, ii: ii.value, ratio: i.value / ii.value, i_err: i.error, ii_err: ii.error })
    }

    /// `N(a^3) = a^4 I(a)`.
    pub fn n(&self) -> f64 {
        self.a.powi(4) * self.i
    }

    /// `D(a^3) = a^4 II(a)`.
    pub fn d(&self) -> f64 {
        self.a.powi(4) * self.ii
    }

    pub fn margin(&self) -> f64 {
        self.ratio - 2.0 * PI
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RatioScan {
    pub samples: Vec<RatioSample>,
    /// Smallest `ratio - 2 pi` over the scan.
    pub min_margin: f64,
    pub a_at_min: f64,
    /// Rates at which the ratio does not exceed `2 pi`.
    pub below: Vec<f64>,
}

impl RatioScan {
    pub fn pass(&self) -> bool {
        self.below.is_empty()
    }

    /// CSV with header `a,I,II,ratio`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["a", "I", "II", "ratio"])?;
        for s in &self.samples {
            out.write_record([fmt17(s.a), fmt17(s.i), fmt17(s.ii), fmt17(s.ratio)])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Evenly spaced rates `a_min, ..., a_max`.
pub fn ratio_scan(a_min: f64, a_max: f64, steps: usize, method: &Method) -> Result<RatioScan> {
    if !(a_min > 0.0 && a_max > a_min && a_max.is_finite()) || steps < 2 {
        return Err(ComparisonError::Domain(format!(
            "scan needs 0 < a_min < a_max and at least two steps, got [{a_min}, {a_max}] x {steps}"
        )));
    }
    let rates: Vec<f64> = (0..steps)
        .map(|k| a_min + (a_max - a_min) * k as f64 / (steps - 1) as f64)
        .collect();
    let samples = rates
        .par_iter()
        .map(|&a| RatioSample::at(a, method))
        .collect::<Result<Vec<_>>>()?;
    let (min_margin, a_at_min) = samples
        .iter()
        .map(|s| (s.margin(), s.a))
        .min_by(|x, y| x.0.total_cmp(&y.0))
        .expect("at least two samples");
    let below = samples.iter().filter(|s| s.margin() <= 0.0).map(|s| s.a).collect();
    Ok(RatioScan { samples, min_margin, a_at_min, below })
}

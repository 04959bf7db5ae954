//! The quotient `Q(f) = ||f mu_s * f mu_s||_2^2 / ||f||_{L^2(mu_s)}^4` on one sheet.

use radial_core::{sliced_norm_sq, RadialProfile, Sample, SliceResolution};
use serde::Serialize;

use crate::nodal::nodal_norm_sq;
use crate::{ExtremizerError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QRatio {
    pub value: f64,
    pub numerator: f64,
    pub norm_sq: f64,
    /// Change of `value` when the slice resolution is doubled.
    pub error: f64,
}

/// `Q` at a fixed slice resolution.
pub fn q_value<V: Sample>(f: &RadialProfile<V>, res: &SliceResolution) -> Result<f64> {
    let m = nodal_norm_sq(f);
    if !(m > 0.0) {
        return Err(ExtremizerError::Domain("zero profile".into()));
    }
    Ok(sliced_norm_sq(f, f, res)? / (m * m))
}

pub fn q_ratio<V: Sample>(f: &RadialProfile<V>) -> Result<QRatio> {
    let norm_sq = nodal_norm_sq(f);
    if !(norm_sq > 0.0) {
        return Err(ExtremizerError::Domain("zero profile".into()));
    }
    let numerator = sliced_norm_sq(f, f, &SliceResolution::for_profiles(f, f, 1.0))?;
    let fine = sliced_norm_sq(f, f, &SliceResolution::for_profiles(f, f, 2.0))?;
    let value = numerator / (norm_sq * norm_sq);
    Ok(QRatio { value, numerator, norm_sq, error: (fine - numerator).abs() / (norm_sq * norm_sq) })
}

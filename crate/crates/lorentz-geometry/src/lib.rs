//! Lorentz geometry of the hyperboloid `|x|^2 - t^2 = s^2`: the Minkowski
//! form, boosts along arbitrary axes, caps and their exact measures, the
//! boost normalization of thin caps, and a numerical check that boosts
//! preserve the measure `mu_bar_s` on both sheets.

mod cap;
mod invariance;
mod spacetime;

pub use cap::{
    bounded_ball_certificate, calibrate_ball_constant, cap_measure, dyadic_cap_asymptotics, dyadic_log_term,
    normalize_cap, BallCertificate, CapRejection, CapSpec, DyadicAsymptotics, Hypothesis, NormalizedCap,
    BALL_CONSTANT, NORMALIZED_RANGE,
};
pub use invariance::{
    invariance_under, lorentz_invariance_check, rotation_invariance_check, sheet_integral, GaussianTest,
    InvarianceReport,
};
pub use spacetime::{
    boost, boost_matrix, form_defect, inverse_boost, minkowski_form, BoostParam, Rotation, SpaceTimePoint,
};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LorentzError {
    #[error("invalid boost: {0}")]
    Boost(String),
    #[error("invalid cap: {0}")]
    Cap(String),
}

pub type Result<T> = std::result::Result<T, LorentzError>;

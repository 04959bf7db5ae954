//! Comparison of the hyperboloid against the cone through the trial family
//! `f_a = exp(-(a/2) sqrt(|y|^2 - 1))`: the integrals `I(a)`, `II(a)`, the
//! ratio scan against `2 pi`, its small-`a` limits and the auxiliary
//! asymptotic integrals.

pub mod asymptotics;
pub mod integrals;
pub mod limits;
pub mod lower_bound;
pub mod scan;

use thiserror::Error;

pub use asymptotics::{asymptotic_integral_suite, closed_integral, log_identity_sides, Identity, IdentityReport};
pub use integrals::{d_of_a, i_of_a, ii_of_a, n_of_a, ratio, Estimate, Method};
pub use limits::{derivative_limits, nd_derivative_at, LimitEstimate, LimitReport, Schedule};
pub use lower_bound::{lower_bound_chain, LowerBoundChain};
pub use scan::{ratio_scan, RatioSample, RatioScan};

#[derive(Debug, Error)]
pub enum ComparisonError {
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),
    #[error(transparent)]
    Core(#[from] radial_core::CoreError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, ComparisonError>;

//! Radial analysis on the one-sheeted hyperboloid `t^2 = |x|^2 - s^2`, `t > 0`,
//! with the measure `dx / sqrt(|x|^2 - s^2)`.
//!
//! Convolutions of radial measures are computed through their sphere-slice
//! representation; an independent Monte-Carlo estimator of pairings serves
//! as an oracle for every quadrature path.

pub mod coords;
pub mod error;
pub mod field;
pub mod kernel;
pub mod mc;
pub mod norms;
pub mod profile;
pub mod quadrature;
pub mod scalar;
pub mod slice;
pub mod sliced;

pub use coords::{dphi, phi, psi};
pub use error::{CoreError, Result};
pub use field::{Conv2DField, FieldGrid};
pub use kernel::sphere_pair_kernel;
pub use mc::{mc_pairing_oracle, Bump, McEstimate, Sheets};
pub use norms::{conv_mass, l2_field_norm, l2_norm_sq, lp_norm, mu_integral};
pub use profile::{RadialProfile, Sample};
pub use quadrature::{Adaptive, QuadratureSpec};
pub use scalar::Real;
pub use slice::{cross_conv, hyperbolic_conv, mixed_conv};
pub use sliced::{sliced_norm_sq, sliced_norm_sq_grad, SliceResolution};

pub type Complex = num_complex::Complex64;
pub type MassParam = coords::MassParam<f64>;
pub type ComplexProfile = RadialProfile<Complex>;

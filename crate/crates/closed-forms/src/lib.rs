//! Analytic densities of `mu_s * mu_s` and `mu_s * sigma_c` as functions of
//! `(|xi|, tau)`, their suprema in `xi`, and the support predicates.
//!
//! Every function is generic over [`Real`]; the `f64` instantiation is the one
//! used by the rest of the workspace.

mod cone;
mod point;
mod selfconv;

pub use cone::{mu_cone_conv, mu_cone_conv_sup, mu_cone_conv_tagged, CONE_SUP_KNEE};
pub use point::{support_predicate, Branch, BranchTag, ConvPoint, Regime, SupportKind};
pub use selfconv::{
    exp_weighted_conv, mu_self_conv, mu_self_conv_alt, mu_self_conv_inner_middle, mu_self_conv_sup,
    mu_self_conv_tagged, self_branch_formula, self_conv_sup_exact, Evaluated,
};

pub use radial_core::Real;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ClosedFormError {
    #[error("argument out of domain: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, ClosedFormError>;

/// Largest value of a density on a uniform `rho` grid over `[0, rho_max]`.
/// Returns the maximizing radius and the value.
pub fn sup_scan<T: Real>(density: impl Fn(T) -> T, rho_max: T, n: usize) -> (T, T) {
    let n = n.max(2);
    let step = rho_max / T::lit((n - 1) as f64);
    (0..n)
        .map(|i| {
            let rho = step * T::lit(i as f64);
            (rho, density(rho))
        })
        .fold((T::zero(), T::neg_infinity()), |best, cur| if cur.1 > best.1 { cur } else { best })
}

use radial_core::coords::MassParam;
use radial_core::{phi, Real};

use crate::{ClosedFormError, Result};

/// A point `(|xi|, tau)` of the frequency space together with the mass parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvPoint<T = f64> {
    pub s: MassParam<T>,
    pub rho: T,
    pub tau: T,
}

impl<T: Real> ConvPoint<T> {
    pub fn new(s: T, rho: T, tau: T) -> Result<Self> {
        let s = MassParam::new(s).ok_or_else(|| ClosedFormError::Domain(format!("mass parameter {s}")))?;
        if !(rho >= T::zero()) || !rho.is_finite() {
            return Err(ClosedFormError::Domain(format!("rho = {rho}")));
        }
        if !tau.is_finite() {
            return Err(ClosedFormError::Domain(format!("tau = {tau}")));
        }
        Ok(Self { s, rho, tau })
    }

    /// Scales all three coordinates by `l > 0`.
    pub fn scaled(self, l: T) -> Self {
        Self {
            s: MassParam::new(self.s.s() * l).expect("positive scaling"),
            rho: self.rho * l,
            tau: self.tau * l,
        }
    }

    /// Curves `|xi| = phi_s(tau) - s`, `phi_{2s}(tau)`, `phi_s(tau) + s`
    /// separating the branches of the self-convolution.
    pub fn self_boundaries(&self) -> [T; 3] {
        let s = self.s.s();
        let r = phi(s, self.tau);
        [r - s, phi(s + s, self.tau), r + s]
    }
}

/// Which branch of the piecewise formula is active.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Inner,
    Middle,
    Outer,
    Outside,
}

/// Derivation regime of the self-convolution: `|xi| <= 2s` or `|xi| > 2s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    Near,
    Far,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BranchTag {
    pub branch: Branch,
    pub regime: Regime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SupportKind {
    SelfConv,
    Cone,
}

/// Membership in the closed support of `mu_s * mu_s` or `mu_s * sigma_c`.
pub fn support_predicate<T: Real>(p: &ConvPoint<T>, kind: SupportKind) -> bool {
    if p.tau < T::zero() {
        return false;
    }
    let s = p.s.s();
    match kind {
        SupportKind::SelfConv => p.rho <= phi(s, p.tau) + s,
        SupportKind::Cone => p.rho <= p.tau + s && p.rho >= s - p.tau,
    }
}

use radial_core::Real;

use crate::point::{Branch, BranchTag, ConvPoint, Regime};
use crate::{ClosedFormError, Result};

/// A density value together with the branch that produced it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluated<T = f64> {
    pub value: T,
    pub tag: BranchTag,
}

fn two_pi<T: Real>() -> T {
    T::PI() + T::PI()
}

/// `|xi| (1 + 4s^2 / (tau^2 - |xi|^2))^{1/2}`, the common radical of the
/// inner and outer branches.
fn radical<T: Real>(s: T, rho: T, tau: T) -> T {
    // (tau^2 - rho^2 + 4s^2) / (tau^2 - rho^2), factored so that the numerator
    // vanishes exactly on |xi| = phi_{2s}(tau)
    let b2 = tau.hypot(s + s);
    let inside = (b2 - rho) * (b2 + rho) / ((tau - rho) * (tau + rho));
    rho * inside.max(T::zero()).sqrt()
}

fn regime<T: Real>(p: &ConvPoint<T>) -> Regime {
    if p.rho <= p.s.s() + p.s.s() {
        Regime::Near
    } else {
        Regime::Far
    }
}

/// Density of `mu_s * mu_s` at `(|xi|, tau)` with the active branch.
pub fn mu_self_conv_tagged<T: Real>(p: &ConvPoint<T>) -> Evaluated<T> {
    let (s, rho, tau) = (p.s.s(), p.rho, p.tau);
    let regime = regime(p);
    let tag = |branch| BranchTag { branch, regime };
    if tau < T::zero() {
        return Evaluated { value: T::zero(), tag: tag(Branch::Outside) };
    }
    if rho == T::zero() {
        if tau == T::zero() {
            return Evaluated { value: T::zero(), tag: tag(Branch::Middle) };
        }
        let four = T::lit(4.0);
        let value = two_pi::<T>() * (T::one() + four * s * s / (tau * tau)).sqrt();
        return Evaluated { value, tag: tag(Branch::Inner) };
    }
    let [b1, b2, b3] = p.self_boundaries();
    let branch = if rho < b1 {
        Branch::Inner
    } else if rho <= b2 {
        Branch::Middle
    } else if rho <= b3 {
        Branch::Outer
    } else {
        Branch::Outside
    };
    let value = if rho == b3 { T::zero() } else { self_branch_formula(branch, p) };
    Evaluated { value, tag: tag(branch) }
}

/// The formula of one branch evaluated at `p` regardless of whether that
/// branch is active there.
pub fn self_branch_formula<T: Real>(branch: Branch, p: &ConvPoint<T>) -> T {
    let (s, rho, tau) = (p.s.s(), p.rho, p.tau);
    match branch {
        Branch::Inner if rho == T::zero() => {
            two_pi::<T>() * (T::one() + T::lit(4.0) * s * s / (tau * tau)).sqrt()
        }
        Branch::Inner => two_pi::<T>() / rho * radical(s, rho, tau),
        Branch::Middle => two_pi::<T>() * tau / rho,
        Branch::Outer => two_pi::<T>() / rho * (tau - radical(s, rho, tau)).max(T::zero()),
        Branch::Outside => T::zero(),
    }
}

/// Density of `mu_s * mu_s`; zero outside the support and on its outer
/// boundary, `2 pi (1 + 4s^2/tau^2)^{1/2}` on the axis `xi = 0`.
pub fn mu_self_conv<T: Real>(p: &ConvPoint<T>) -> T {
    mu_self_conv_tagged(p).value
}

/// The same density assembled from the two derivation regimes
/// (`|xi| <= 2s` and `|xi| > 2s`) with thresholds in `tau` rather than `|xi|`.
pub fn mu_self_conv_alt<T: Real>(p: &ConvPoint<T>) -> T {
    let (s, rho, tau) = (p.s.s(), p.rho, p.tau);
    if tau < T::zero() {
        return T::zero();
    }
    if rho == T::zero() {
        return mu_self_conv(p);
    }
    let two_s = s + s;
    // tau-thresholds: sqrt((rho+s)^2 - s^2), sqrt((rho-s)^2 - s^2), sqrt(rho^2 - 4s^2)
    let upper = (rho * (rho + two_s)).sqrt();
    let mut sum = T::zero();
    if tau > upper {
        sum = sum + radical(s, rho, tau);
    }
    if rho <= two_s {
        if tau <= upper {
            sum = sum + tau;
        }
    } else {
        let lower = (rho * (rho - two_s)).sqrt();
        let mid = ((rho - two_s) * (rho + two_s)).sqrt();
        if lower <= tau && tau < mid {
            sum = sum + (tau - radical(s, rho, tau)).max(T::zero());
        }
        if mid <= tau && tau <= upper {
            sum = sum + tau;
        }
    }
    two_pi::<T>() / rho * sum
}

/// `mu_s * mu_s` restricted to its inner and middle branches.
pub fn mu_self_conv_inner_middle<T: Real>(p: &ConvPoint<T>) -> T {
    let e = mu_self_conv_tagged(p);
    match e.tag.branch {
        Branch::Inner | Branch::Middle => e.value,
        Branch::Outer | Branch::Outside => T::zero(),
    }
}

/// Bracket `(2 pi (1 + 4s^2/tau^2)^{1/2}, 2 pi (1 + 2s/tau))` for the supremum
/// over `xi` of `mu_s * mu_s(xi, tau)`.
pub fn mu_self_conv_sup<T: Real>(s: T, tau: T) -> Result<(T, T)> {
    if !(tau > T::zero()) || !(s >= T::zero()) {
        return Err(ClosedFormError::Domain(format!("sup bracket needs tau > 0, s >= 0 (s = {s}, tau = {tau})")));
    }
    let four = T::lit(4.0);
    let lower = two_pi::<T>() * (T::one() + four * s * s / (tau * tau)).sqrt();
    let upper = two_pi::<T>() * (T::one() + (s + s) / tau);
    Ok((lower, upper))
}

/// The supremum itself, attained where the inner branch meets the middle one:
/// `2 pi tau / (phi_s(tau) - s)`.
pub fn self_conv_sup_exact<T: Real>(s: T, tau: T) -> Result<T> {
    mu_self_conv_sup(s, tau)?;
    if s == T::zero() {
        return Ok(two_pi());
    }
    // tau / (phi - s) = (phi + s) / tau
    Ok(two_pi::<T>() * (radial_core::phi(s, tau) + s) / tau)
}

/// `f_a mu_s * f_a mu_s` for `f_a = exp(-a t / 2)`, which factors as
/// `exp(-a tau / 2) mu_s * mu_s`.
pub fn exp_weighted_conv<T: Real>(a: T, p: &ConvPoint<T>) -> Result<T> {
    if !(a >= T::zero()) {
        return Err(ClosedFormError::Domain(format!("weight exponent a = {a}")));
    }
    Ok((-a * p.tau / T::lit(2.0)).exp() * mu_self_conv(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn pt(s: f64, rho: f64, tau: f64) -> ConvPoint {
        ConvPoint::new(s, rho, tau).unwrap()
    }

    #[test]
    fn axis_value() {
        assert!((mu_self_conv(&pt(1.0, 0.0, 2.0)) - 2.0 * PI * 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn outside_support() {
        let e = mu_self_conv_tagged(&pt(1.0, 5.0, 1.0));
        assert_eq!(e.value, 0.0);
        assert_eq!(e.tag.branch, Branch::Outside);
        assert_eq!(mu_self_conv(&pt(1.0, 0.3, -0.1)), 0.0);
        assert_eq!(mu_self_conv(&pt(1.0, 0.0, 0.0)), 0.0);
    }

    #[test]
    fn cone_limit_is_flat() {
        for (rho, tau) in [(0.0, 1.0), (0.4, 1.0), (0.99, 1.0)] {
            assert!((mu_self_conv(&pt(0.0, rho, tau)) - 2.0 * PI).abs() < 1e-13);
        }
    }

    #[test]
    fn single_precision() {
        let p = ConvPoint::<f32>::new(1.0, 1.3, 2.7).unwrap();
        let q = pt(1.0, 1.3, 2.7);
        assert!((mu_self_conv(&p) as f64 - mu_self_conv(&q)).abs() < 1e-5);
    }
}

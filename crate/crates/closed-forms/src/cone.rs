use radial_core::{phi, Real};

use crate::point::{Branch, ConvPoint};
use crate::{ClosedFormError, Result};

/// Ratio `tau / s` at which the supremum of `mu_s * sigma_c` changes from the
/// boundary value to the interior critical value: `sqrt(2(sqrt 5 - 1)) / 2`.
pub const CONE_SUP_KNEE: f64 = 0.786_151_377_757_423_3;

fn two_pi<T: Real>() -> T {
    T::PI() + T::PI()
}

/// Density of `mu_s * sigma_c` at `(|xi|, tau)` with the active branch.
///
/// The point `(0, s)` is a removable discontinuity of the formula; it is
/// evaluated by the middle branch limit `2 pi`.
pub fn mu_cone_conv_tagged<T: Real>(p: &ConvPoint<T>) -> (T, Branch) {
    let (s, rho, tau) = (p.s.s(), p.rho, p.tau);
    let half = T::lit(0.5);
    if tau < T::zero() || rho > tau + s {
        return (T::zero(), Branch::Outside);
    }
    if s == T::zero() {
        // sigma_c * sigma_c is flat on the solid cone
        return if tau > T::zero() { (two_pi(), Branch::Inner) } else { (T::zero(), Branch::Outside) };
    }
    if tau >= s && rho < tau - s {
        let gap = (tau - rho) * (tau + rho);
        return (two_pi::<T>() * (gap + s * s) / gap, Branch::Inner);
    }
    if rho < (tau - s).abs() {
        return (T::zero(), Branch::Outside);
    }
    if rho < phi(s, tau) {
        if rho == T::zero() {
            return (two_pi(), Branch::Middle);
        }
        let w = tau + rho;
        let value = two_pi::<T>() * (w - s) * (w + s) * half / (rho * w);
        return (value.max(T::zero()), Branch::Middle);
    }
    let d = rho - tau;
    let value = two_pi::<T>() * (s - d) * (s + d) * half / (rho * d);
    (value.max(T::zero()), Branch::Outer)
}

/// Density of `mu_s * sigma_c`; zero for `tau < 0` or `|xi| > tau + s`.
pub fn mu_cone_conv<T: Real>(p: &ConvPoint<T>) -> T {
    mu_cone_conv_tagged(p).0
}

/// Supremum over `xi` of `mu_s * sigma_c(xi, tau)`.
///
/// Between the knee and `tau = s` the supremum is the interior critical value
/// `pi (1 + (s - sqrt(s^2 - tau^2))^2 / tau^2)` of the middle branch, which
/// joins the boundary value continuously at the knee. At `tau = s` the
/// supremum jumps; the value returned there is the limit from above, `4 pi`.
pub fn mu_cone_conv_sup<T: Real>(s: T, tau: T) -> Result<T> {
    if !(tau >= T::zero()) || !(s >= T::zero()) {
        return Err(ClosedFormError::Domain(format!("cone sup needs tau >= 0, s >= 0 (s = {s}, tau = {tau})")));
    }
    if s == T::zero() {
        return Ok(if tau > T::zero() { two_pi() } else { T::zero() });
    }
    let knee = s * T::lit(CONE_SUP_KNEE);
    let factor = if tau <= knee {
        tau / phi(s, tau)
    } else if tau < s {
        let d = s - ((s - tau) * (s + tau)).sqrt();
        (T::one() + d * d / (tau * tau)) / T::lit(2.0)
    } else {
        T::one() + s / (tau + tau - s)
    };
    Ok(two_pi::<T>() * factor)
}

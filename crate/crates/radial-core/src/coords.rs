use crate::scalar::Real;

/// Mass parameter `s >= 0`; `s = 0` is the light cone, `s > 0` the hyperboloid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MassParam<T = f64> {
    s: T,
}

impl<T: Real> MassParam<T> {
    pub fn new(s: T) -> Option<Self> {
        (s >= T::zero() && s.is_finite()).then_some(Self { s })
    }

    pub fn cone() -> Self {
        Self { s: T::zero() }
    }

    #[inline]
    pub fn s(self) -> T {
        self.s
    }

    #[inline]
    pub fn is_cone(self) -> bool {
        self.s == T::zero()
    }

    /// Height over the radius: `psi_s(r) = sqrt(r^2 - s^2)`, clamped to 0 below `s`.
    #[inline]
    pub fn psi(self, r: T) -> T {
        psi(self.s, r)
    }

    /// Radius over the height: `phi_s(t) = sqrt(t^2 + s^2)`.
    #[inline]
    pub fn phi(self, t: T) -> T {
        phi(self.s, t)
    }
}

#[inline]
pub fn psi<T: Real>(s: T, r: T) -> T {
    if r <= s {
        return T::zero();
    }
    // (r - s)(r + s) keeps relative accuracy near the vertex
    ((r - s) * (r + s)).sqrt()
}

#[inline]
pub fn phi<T: Real>(s: T, t: T) -> T {
    t.hypot(s)
}

/// Derivative of `phi_s` in `t`.
#[inline]
pub fn dphi<T: Real>(s: T, t: T) -> T {
    let r = phi(s, t);
    if r == T::zero() {
        T::one()
    } else {
        t / r
    }
}

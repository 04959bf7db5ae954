use radial_core::Real;

use crate::{LorentzError, Result};

/// A point `(x, t)` of `R^3 x R`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct SpaceTimePoint<T = f64> {
    pub x: [T; 3],
    pub t: T,
}

impl<T: Real> SpaceTimePoint<T> {
    pub fn new(x: [T; 3], t: T) -> Self {
        Self { x, t }
    }

    pub fn scale(self, k: T) -> Self {
        Self { x: self.x.map(|v| v * k), t: self.t * k }
    }

    pub fn spatial_norm(&self) -> T {
        norm(self.x)
    }

    pub fn is_finite(&self) -> bool {
        self.x.iter().all(|v| v.is_finite()) && self.t.is_finite()
    }
}

/// `B(p, q) = p_4 q_4 - p_3 q_3 - p_2 q_2 - p_1 q_1`.
pub fn minkowski_form<T: Real>(p: &SpaceTimePoint<T>, q: &SpaceTimePoint<T>) -> T {
    p.t * q.t - dot(p.x, q.x)
}

pub(crate) fn dot<T: Real>(a: [T; 3], b: [T; 3]) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn norm<T: Real>(a: [T; 3]) -> T {
    dot(a, a).sqrt()
}

fn cross<T: Real>(a: [T; 3], b: [T; 3]) -> [T; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Rotation of `R^3` as an orthogonal matrix, acting on the spatial part.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation<T = f64> {
    pub m: [[T; 3]; 3],
}

impl<T: Real> Rotation<T> {
    pub fn identity() -> Self {
        let (o, z) = (T::one(), T::zero());
        Self { m: [[o, z, z], [z, o, z], [z, z, o]] }
    }

    /// Rotation by `angle` about the unit vector `axis` (Rodrigues).
    pub fn about(axis: [T; 3], angle: T) -> Self {
        let n = norm(axis);
        let k = axis.map(|v| v / n);
        let (s, c) = angle.sin_cos();
        let v = T::one() - c;
        let mut m = [[T::zero(); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = v * k[i] * k[j];
                if i == j {
                    *e = *e + c;
                }
            }
        }
        m[0][1] = m[0][1] - s * k[2];
        m[0][2] = m[0][2] + s * k[1];
        m[1][0] = m[1][0] + s * k[2];
        m[1][2] = m[1][2] - s * k[0];
        m[2][0] = m[2][0] - s * k[1];
        m[2][1] = m[2][1] + s * k[0];
        Self { m }
    }

    /// The rotation in the plane of `e_1` and `target` taking `e_1` to the
    /// unit vector along `target`.
    pub fn taking_e1_to(target: [T; 3]) -> Self {
        let n = norm(target);
        let u = target.map(|v| v / n);
        let e1 = [T::one(), T::zero(), T::zero()];
        let w = cross(e1, u);
        let sin = norm(w);
        let cos = u[0];
        if sin <= T::epsilon() {
            if cos > T::zero() {
                return Self::identity();
            }
            // half turn about e_3
            return Self::about([T::zero(), T::zero(), T::one()], T::PI());
        }
        Self::about(w, sin.atan2(cos))
    }

    pub fn apply(&self, v: [T; 3]) -> [T; 3] {
        let m = &self.m;
        [dot(m[0], v), dot(m[1], v), dot(m[2], v)]
    }

    pub fn inverse(&self) -> Self {
        let m = &self.m;
        Self { m: [0, 1, 2].map(|i| [m[0][i], m[1][i], m[2][i]]) }
    }

    pub fn on_point(&self, p: &SpaceTimePoint<T>) -> SpaceTimePoint<T> {
        SpaceTimePoint { x: self.apply(p.x), t: p.t }
    }
}

/// Boost parameter `t in (-1, 1)` along a unit spatial axis.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct BoostParam<T = f64> {
    pub t: T,
    pub axis: [T; 3],
}

impl<T: Real> BoostParam<T> {
    /// Boost along `e_1`.
    pub fn new(t: T) -> Result<Self> {
        Self::along(t, [T::one(), T::zero(), T::zero()])
    }

    /// Boost along `axis`, which is normalized.
    pub fn along(t: T, axis: [T; 3]) -> Result<Self> {
        if !(t.abs() < T::one()) {
            return Err(LorentzError::Boost(format!("|t| = {} is not below 1", t.abs())));
        }
        let n = norm(axis);
        if !(n > T::zero()) || !n.is_finite() {
            return Err(LorentzError::Boost("boost axis must be a nonzero finite vector".into()));
        }
        Ok(Self { t, axis: axis.map(|v| v / n) })
    }

    pub fn inverse(self) -> Self {
        Self { t: -self.t, axis: self.axis }
    }

    /// `(1 - t^2)^{1/2}`, the factor relating the scaled boost to `L^t`.
    pub fn contraction(&self) -> T {
        ((T::one() - self.t) * (T::one() + self.t)).sqrt()
    }
}

/// Applies `L^t` along `bp.axis`; with `scaled` the result is multiplied by
/// `(1 - t^2)^{1/2}`, giving `L_t`.
///
/// Along `e_1` this is `((x_1 + t tau) / c, x_2, x_3, (t x_1 + tau) / c)` with
/// `c = (1 - t^2)^{1/2}`; other axes conjugate by a rotation, which only
/// affects the component along the axis.
pub fn boost<T: Real>(bp: &BoostParam<T>, p: &SpaceTimePoint<T>, scaled: bool) -> SpaceTimePoint<T> {
    let c = bp.contraction();
    let along = dot(bp.axis, p.x);
    let new_along = (along + bp.t * p.t) / c;
    let delta = new_along - along;
    let mut x = [T::zero(); 3];
    for (i, xi) in x.iter_mut().enumerate() {
        *xi = p.x[i] + delta * bp.axis[i];
    }
    let out = SpaceTimePoint { x, t: (bp.t * along + p.t) / c };
    if scaled {
        out.scale(c)
    } else {
        out
    }
}

/// Inverse of [`boost`] with the same flag: `(L^t)^{-1} = L^{-t}` and
/// `(L_t)^{-1} = (1 - t^2)^{-1/2} L^{-t}`.
pub fn inverse_boost<T: Real>(bp: &BoostParam<T>, p: &SpaceTimePoint<T>, scaled: bool) -> SpaceTimePoint<T> {
    let q = boost(&bp.inverse(), p, false);
    if scaled {
        q.scale(T::one() / bp.contraction())
    } else {
        q
    }
}

/// Matrix of `L^t` in the coordinates `(x_1, x_2, x_3, t)`.
pub fn boost_matrix<T: Real>(bp: &BoostParam<T>) -> [[T; 4]; 4] {
    let mut m = [[T::zero(); 4]; 4];
    for j in 0..4 {
        let mut e = SpaceTimePoint { x: [T::zero(); 3], t: T::zero() };
        if j < 3 {
            e.x[j] = T::one();
        } else {
            e.t = T::one();
        }
        let col = boost(bp, &e, false);
        for i in 0..3 {
            m[i][j] = col.x[i];
        }
        m[3][j] = col.t;
    }
    m
}

/// Verifies `B(Lp, Lq) = B(p, q)` pointwise, returning the discrepancy.
pub fn form_defect<T: Real>(bp: &BoostParam<T>, p: &SpaceTimePoint<T>, q: &SpaceTimePoint<T>) -> T {
    let lp = boost(bp, p, false);
    let lq = boost(bp, q, false);
    (minkowski_form(&lp, &lq) - minkowski_form(p, q)).abs()
}

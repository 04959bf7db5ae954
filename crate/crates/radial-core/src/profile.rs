use std::fmt::Debug;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use num_traits::Zero;

use crate::coords::{phi, psi};
use crate::error::{CoreError, Result};

/// Value type of a profile: real or complex samples.
pub trait Sample:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + 'static
{
    fn from_real(x: f64) -> Self;
    fn scale(self, k: f64) -> Self;
    fn abs2(self) -> f64;
    fn is_finite(self) -> bool;

    fn abs(self) -> f64 {
        self.abs2().sqrt()
    }
}

impl Sample for f64 {
    fn from_real(x: f64) -> Self {
        x
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
    fn abs2(self) -> f64 {
        self * self
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn abs(self) -> f64 {
        f64::abs(self)
    }
}

impl Sample for Complex64 {
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
    fn abs2(self) -> f64 {
        self.norm_sqr()
    }
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Radial function on the hyperboloid of mass parameter `s`, sampled at
/// radii `r_0 < ... < r_N` and interpolated linearly in `r`.
///
/// The profile vanishes outside `[r_0, r_N]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialProfile<V: Sample = f64> {
    s: f64,
    radii: Vec<f64>,
    heights: Vec<f64>,
    values: Vec<V>,
}

/// Position of a height inside a profile: node index and linear weight in `r`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Locator {
    pub index: usize,
    pub lambda: f64,
}

impl<V: Sample> RadialProfile<V> {
    pub fn new(s: f64, radii: Vec<f64>, values: Vec<V>) -> Result<Self> {
        if !(s >= 0.0 && s.is_finite()) {
            return Err(CoreError::Profile(format!("mass parameter {s} is not a finite s >= 0")));
        }
        if radii.len() < 2 || radii.len() != values.len() {
            return Err(CoreError::Profile(format!(
                "need at least two nodes and matching values ({} radii, {} values)",
                radii.len(),
                values.len()
            )));
        }
        if radii[0] < s || !radii.iter().all(|r| r.is_finite()) {
            return Err(CoreError::Profile(format!("radii must be finite and >= s = {s}")));
        }
        if radii.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CoreError::Profile("radii must be strictly increasing".into()));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(CoreError::Profile("values must be finite".into()));
        }
        let heights = radii.iter().map(|&r| psi(s, r)).collect();
        Ok(Self {
            s,
            radii,
            heights,
            values,
        })
    }

    pub fn from_fn(s: f64, radii: Vec<f64>, f: impl Fn(f64) -> V) -> Result<Self> {
        let values = radii.iter().map(|&r| f(r)).collect();
        Self::new(s, radii, values)
    }

    /// Nodes uniform in the height `u = psi_s(r)` between `r_min` and `r_max`.
    pub fn height_uniform(
        s: f64,
        r_min: f64,
        r_max: f64,
        nodes: usize,
        f: impl Fn(f64) -> V,
    ) -> Result<Self> {
        Self::from_fn(s, height_uniform_radii(s, r_min, r_max, nodes)?, f)
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Node heights `psi_s(r_i)`.
    pub fn heights(&self) -> &[f64] {
        &self.heights
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    pub fn r_range(&self) -> (f64, f64) {
        (self.radii[0], *self.radii.last().unwrap())
    }

    pub fn t_range(&self) -> (f64, f64) {
        (self.heights[0], *self.heights.last().unwrap())
    }

    /// Same grid, new values.
    pub fn with_values<W: Sample>(&self, values: Vec<W>) -> Result<RadialProfile<W>> {
        RadialProfile::new(self.s, self.radii.clone(), values)
    }

    pub fn map<W: Sample>(&self, f: impl Fn(V) -> W) -> RadialProfile<W> {
        RadialProfile {
            s: self.s,
            radii: self.radii.clone(),
            heights: self.heights.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scaled(&self, k: f64) -> Self {
        self.map(|v| v.scale(k))
    }

    /// Pointwise modulus.
    pub fn modulus(&self) -> RadialProfile<f64> {
        self.map(|v| v.abs())
    }

    /// The dilation `f -> l^{-1} f(l^{-1} .)` carrying the hyperboloid of
    /// parameter `s` to the one of parameter `l s`.
    pub fn dilate(&self, l: f64) -> Self {
        assert!(l > 0.0, "dilation factor must be positive");
        RadialProfile {
            s: self.s * l,
            radii: self.radii.iter().map(|r| r * l).collect(),
            heights: self.heights.iter().map(|t| t * l).collect(),
            values: self.values.iter().map(|v| v.scale(1.0 / l)).collect(),
        }
    }

    /// Locates radius `r`; `None` outside the support.
    pub fn locate_radius(&self, r: f64) -> Option<Locator> {
        let (lo, hi) = self.r_range();
        let r = snap(r, lo, hi)?;
        let i = self.radii.partition_point(|&x| x <= r).clamp(1, self.radii.len() - 1) - 1;
        let lambda = (r - self.radii[i]) / (self.radii[i + 1] - self.radii[i]);
        Some(Locator {
            index: i,
            lambda: lambda.clamp(0.0, 1.0),
        })
    }

    /// Locates height `t`, interpolating in `r = phi_s(t)`.
    pub fn locate_height(&self, t: f64) -> Option<Locator> {
        let (lo, hi) = self.t_range();
        let t = snap(t, lo, hi)?;
        let i = self.heights.partition_point(|&x| x <= t).clamp(1, self.heights.len() - 1) - 1;
        let r = phi(self.s, t);
        let lambda = (r - self.radii[i]) / (self.radii[i + 1] - self.radii[i]);
        Some(Locator {
            index: i,
            lambda: lambda.clamp(0.0, 1.0),
        })
    }

    #[inline]
    fn blend(&self, loc: Locator) -> V {
        let Locator { index: i, lambda } = loc;
        if lambda == 0.0 {
            return self.values[i];
        }
        self.values[i].scale(1.0 - lambda) + self.values[i + 1].scale(lambda)
    }

    /// Value at radius `r`.
    pub fn eval(&self, r: f64) -> V {
        self.locate_radius(r).map_or(V::zero(), |l| self.blend(l))
    }

    /// Value at height `t`, i.e. `f(phi_s(t))`.
    pub fn eval_height(&self, t: f64) -> V {
        self.locate_height(t).map_or(V::zero(), |l| self.blend(l))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
}

impl RadialProfile<f64> {
    /// Indicator of `[a, b]` on `nodes` radii.
    pub fn indicator(s: f64, a: f64, b: f64, nodes: usize) -> Result<Self> {
        Self::height_uniform(s, a, b, nodes, |_| 1.0)
    }

    /// Trial profile `exp(-(a/2) psi_s(r))` on `[s, r_max]`.
    pub fn trial(s: f64, a: f64, r_max: f64, nodes: usize) -> Result<Self> {
        Self::height_uniform(s, s, r_max, nodes, |r| (-0.5 * a * psi(s, r)).exp())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&v| v >= 0.0)
    }
}

/// Clamps arguments within a few ulps of the support ends, so that samples
/// placed on an end by arithmetic are not lost to rounding.
#[inline]
fn snap(x: f64, lo: f64, hi: f64) -> Option<f64> {
    if x >= lo && x <= hi {
        return Some(x);
    }
    let slack = 8.0 * f64::EPSILON;
    if x > hi && x <= hi + slack * hi.abs() {
        Some(hi)
    } else if x < lo && x >= lo - slack * lo.abs().max(f64::MIN_POSITIVE) {
        Some(lo)
    } else {
        None
    }
}

/// Radii whose heights are uniformly spaced on `[psi(r_min), psi(r_max)]`.
pub fn height_uniform_radii(s: f64, r_min: f64, r_max: f64, nodes: usize) -> Result<Vec<f64>> {
    if nodes < 2 || !(r_min >= s && r_max > r_min) {
        return Err(CoreError::Profile(format!(
            "bad grid request: {nodes} nodes on [{r_min}, {r_max}] with s = {s}"
        )));
    }
    let (u0, u1) = (psi(s, r_min), psi(s, r_max));
    let mut radii: Vec<f64> = (0..nodes)
        .map(|i| phi(s, u0 + (u1 - u0) * i as f64 / (nodes - 1) as f64))
        .collect();
    radii[0] = r_min;
    radii[nodes - 1] = r_max;
    Ok(radii)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(RadialProfile::new(1.0, vec![0.5, 2.0], vec![1.0, 1.0]).is_err());
        assert!(RadialProfile::new(1.0, vec![2.0, 2.0], vec![1.0, 1.0]).is_err());
        assert!(RadialProfile::new(1.0, vec![1.0, 2.0], vec![1.0, f64::NAN]).is_err());
        assert!(RadialProfile::new(-1.0, vec![1.0, 2.0], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn interpolation_is_linear_in_r() {
        let p = RadialProfile::new(1.0, vec![1.0, 3.0, 5.0], vec![0.0, 2.0, 0.0]).unwrap();
        assert_eq!(p.eval(2.0), 1.0);
        assert_eq!(p.eval(4.5), 0.5);
        assert_eq!(p.eval(5.5), 0.0);
        assert_eq!(p.eval(0.9), 0.0);
        let t = psi(1.0, 2.0);
        assert!((p.eval_height(t) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dilation_scales_heights() {
        let p = RadialProfile::trial(1.0, 0.3, 10.0, 50).unwrap();
        let q = p.dilate(2.0);
        assert_eq!(q.s(), 2.0);
        assert!((q.eval(8.0) - 0.5 * p.eval(4.0)).abs() < 1e-15);
        assert!((q.heights()[7] - 2.0 * p.heights()[7]).abs() < 1e-13);
    }
}

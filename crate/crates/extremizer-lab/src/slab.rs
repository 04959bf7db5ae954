//! Slice functional for functions on both sheets.
//!
//! With signed heights `t` and `phi(t) = sqrt(t^2 + s^2)` on both sheets, the
//! density of `F mu * G mu` at `(rho, tau)` is `(2 pi / rho) J(rho, tau)` with
//! `J = int F(t) G(tau - t) 1{|phi(t) - phi(tau - t)| <= rho <= phi(t) + phi(tau - t)} dt`.
//! For `tau > 0` and the offset `x >= 0` from `tau / 2`, the difference and sum
//! radii are increasing in `x`, so the same-sheet engine of radial-core applies
//! verbatim; offsets `x <= tau / 2` pair two upper points (the `A` part) and
//! offsets `x >= tau / 2` pair an upper with a lower point (the cross part).
//! Negative `tau` is the positive half of the sheet-swapped functions.
//!
//! Offsets where the product vanishes are not sampled: the cumulative integral
//! is constant there and its contribution is added in closed form.

use std::f64::consts::PI;

use radial_core::quadrature::GaussLegendre;
use radial_core::{phi, RadialProfile, Sample, SliceResolution};
use rayon::prelude::*;

const CHUNK: usize = 32;

/// A function on the two sheets; `None` is the zero function.
#[derive(Clone, Copy, Debug)]
pub struct Sheets<'a, V: Sample> {
    pub upper: Option<&'a RadialProfile<V>>,
    pub lower: Option<&'a RadialProfile<V>>,
}

impl<'a, V: Sample> Sheets<'a, V> {
    pub fn upper(f: &'a RadialProfile<V>) -> Self {
        Self { upper: Some(f), lower: None }
    }

    pub fn swapped(self) -> Self {
        Self { upper: self.lower, lower: self.upper }
    }
}

/// Gram entries over one half `tau >= 0` of the same-sheet part `A` and the
/// cross part `X`, which carries both orderings of the pair.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct HalfGram {
    pub aa: f64,
    pub ax: f64,
    pub xx: f64,
}

impl std::ops::Add for HalfGram {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { aa: self.aa + o.aa, ax: self.ax + o.ax, xx: self.xx + o.xx }
    }
}

#[inline]
fn dot<V: Sample>(a: V, b: V) -> f64 {
    0.25 * ((a + b).abs2() - (a - b).abs2())
}

#[inline]
fn at<V: Sample>(p: Option<&RadialProfile<V>>, t: f64) -> V {
    p.map_or(V::zero(), |p| p.eval_height(t))
}

fn range<V: Sample>(p: Option<&RadialProfile<V>>) -> Option<(f64, f64)> {
    p.map(|p| p.t_range())
}

fn clip(iv: Option<(f64, f64)>, lo: f64, hi: f64) -> Option<(f64, f64)> {
    let (a, b) = iv?;
    let (a, b) = (a.max(lo), b.min(hi));
    (b > a).then_some((a, b))
}

/// Offsets where `p(h + x) q(h -/+ x)` can be nonzero.
fn term(p: Option<(f64, f64)>, q: Option<(f64, f64)>, h: f64, lower: bool) -> Option<(f64, f64)> {
    let (p0, p1) = p?;
    let (q0, q1) = q?;
    let (a, b) = if lower { (h + q0, h + q1) } else { (h - q1, h - q0) };
    Some(((p0 - h).max(a), (p1 - h).min(b)))
}

struct Plan {
    tau_lo: f64,
    tau_hi: f64,
    u_max: f64,
    /// `h + l_max` with lower sheets, `h - t_min` of the upper sheets without.
    lower_reach: Option<f64>,
    u_min: f64,
}

fn plan<V: Sample>(f: &Sheets<V>, g: &Sheets<V>) -> Option<Plan> {
    let (fu, gu, fl, gl) = (range(f.upper), range(g.upper), range(f.lower), range(g.lower));
    let same = fu.is_some() && gu.is_some();
    let cross = (fu.is_some() && gl.is_some()) || (gu.is_some() && fl.is_some());
    if !same && !cross {
        return None;
    }
    let uppers: Vec<(f64, f64)> = [fu, gu].into_iter().flatten().collect();
    let lowers: Vec<(f64, f64)> = [fl, gl].into_iter().flatten().collect();
    let u_max = uppers.iter().map(|r| r.1).fold(f64::MIN, f64::max);
    let u_min = uppers.iter().map(|r| r.0).fold(f64::MAX, f64::min);
    let lower_reach = (!lowers.is_empty()).then(|| lowers.iter().map(|r| r.1).fold(f64::MIN, f64::max));
    let same_hi = if same { fu.unwrap().1 + gu.unwrap().1 } else { 0.0 };
    let (tau_lo, tau_hi) = if cross {
        (0.0, same_hi.max(u_max))
    } else {
        (fu.unwrap().0 + gu.unwrap().0, same_hi)
    };
    Some(Plan { tau_lo, tau_hi, u_max, lower_reach, u_min })
}

fn tau_nodes(lo: f64, hi: f64, res: &SliceResolution) -> Vec<(f64, f64)> {
    let gl = GaussLegendre::new(res.order);
    let n = ((hi - lo) / res.tau_step).ceil().max(1.0) as usize;
    (0..n)
        .flat_map(|i| {
            let a = lo + (hi - lo) * i as f64 / n as f64;
            let b = lo + (hi - lo) * (i + 1) as f64 / n as f64;
            gl.on(a, b).collect::<Vec<_>>()
        })
        .collect()
}

fn bilinear<V: Sample>(x: &Slices<V>, c1: &[V], c2: &[V]) -> f64 {
    let m = c1.len() - 1;
    let (w1, w2) = (c1[m], c2[m]);
    let mut v = x.tail * dot(w1, w2);
    for k in 0..m {
        v += 0.5 * (x.d[k + 1] - x.d[k]) * (dot(c1[k], c2[k]) + dot(c1[k + 1], c2[k + 1]));
        v += 0.5 * (x.sg[k + 1] - x.sg[k]) * (dot(w1 - c1[k], w2 - c2[k]) + dot(w1 - c1[k + 1], w2 - c2[k + 1]));
    }
    v
}

struct Slices<V> {
    d: Vec<f64>,
    sg: Vec<f64>,
    /// `S(x_a) - D(x_b)`: the closed-form part outside the sampled offsets.
    tail: f64,
    same: Vec<V>,
    cross: Vec<V>,
    has_cross: bool,
}

fn slices<V: Sample>(s: f64, tau: f64, f: &Sheets<V>, g: &Sheets<V>, p: &Plan, x_step: f64) -> Option<Slices<V>> {
    let h = 0.5 * tau;
    let w = match p.lower_reach {
        Some(l) => (p.u_max - h).min(h + l),
        None => (p.u_max - h).min(h - p.u_min),
    };
    if w <= 0.0 {
        return None;
    }
    let (fu, gu, fl, gl) = (range(f.upper), range(g.upper), range(f.lower), range(g.lower));
    let parts = [
        clip(term(fu, gu, h, false), 0.0, h.min(w)),
        clip(term(gu, fu, h, false), 0.0, h.min(w)),
        clip(term(fu, gl, h, true), h, w),
        clip(term(gu, fl, h, true), h, w),
    ];
    let (xa, xb) = parts
        .iter()
        .flatten()
        .fold(None, |acc: Option<(f64, f64)>, &(a, b)| Some(acc.map_or((a, b), |(x, y)| (x.min(a), y.max(b)))))?;
    let m = (((xb - xa) / x_step).ceil() as usize).max(4);
    let delta = (xb - xa) / m as f64;
    let mut x: Vec<f64> = (0..=m).map(|k| if k == m { xb } else { xa + k as f64 * delta }).collect();
    if h > xa && h < xb {
        let k = ((h - xa) / delta).round() as usize;
        if (x[k] - h).abs() <= 1e-12 * delta {
            x[k] = h;
        } else {
            let at_k = x.partition_point(|&y| y < h);
            x.insert(at_k, h);
        }
    }
    let n = x.len();
    let has_cross = parts[2].is_some() || parts[3].is_some();
    let p_same = |x: f64| at(f.upper, h + x) * at(g.upper, h - x) + at(g.upper, h + x) * at(f.upper, h - x);
    let p_cross = |x: f64| at(f.upper, h + x) * at(g.lower, x - h) + at(g.upper, h + x) * at(f.lower, x - h);
    let va: Vec<V> = x.iter().map(|&y| if y <= h { p_same(y) } else { V::zero() }).collect();
    let vc: Vec<V> = x
        .iter()
        .map(|&y| if has_cross && y >= h { p_cross(y) } else { V::zero() })
        .collect();
    let mut same = vec![V::zero(); n];
    let mut cross = vec![V::zero(); if has_cross { n } else { 0 }];
    for k in 0..n - 1 {
        let dx = x[k + 1] - x[k];
        if x[k + 1] <= h {
            same[k + 1] = same[k] + (va[k] + va[k + 1]).scale(0.5 * dx);
            if has_cross {
                cross[k + 1] = cross[k];
            }
        } else {
            same[k + 1] = same[k];
            if has_cross {
                cross[k + 1] = cross[k] + (vc[k] + vc[k + 1]).scale(0.5 * dx);
            }
        }
    }
    let (d, sg) = x
        .iter()
        .map(|&x| {
            let (a, b) = (phi(s, h + x), phi(s, h - x));
            (a - b, a + b)
        })
        .unzip::<f64, f64, Vec<f64>, Vec<f64>>();
    let tail = sg[0] - d[n - 1];
    Some(Slices { d, sg, tail, same, cross, has_cross })
}

/// Gram entries of `f` against `g` over `tau >= 0`, scaled to `L^2(R^4)` units.
pub fn half_gram<V: Sample>(s: f64, f: &Sheets<V>, g: &Sheets<V>, res: &SliceResolution) -> HalfGram {
    let Some(p) = plan(f, g) else {
        return HalfGram::default();
    };
    let nodes = tau_nodes(p.tau_lo, p.tau_hi, res);
    let partial: Vec<HalfGram> = nodes
        .par_chunks(CHUNK)
        .map(|chunk| {
            chunk.iter().fold(HalfGram::default(), |acc, &(tau, wt)| {
                let Some(sl) = slices(s, tau, f, g, &p, res.x_step) else {
                    return acc;
                };
                let mut out = HalfGram { aa: wt * bilinear(&sl, &sl.same, &sl.same), ..HalfGram::default() };
                if sl.has_cross {
                    out.ax = wt * bilinear(&sl, &sl.same, &sl.cross);
                    out.xx = wt * bilinear(&sl, &sl.cross, &sl.cross);
                }
                acc + out
            })
        })
        .collect();
    let total = partial.into_iter().fold(HalfGram::default(), |a, b| a + b);
    let k = 16.0 * PI.powi(3);
    HalfGram { aa: k * total.aa, ax: k * total.ax, xx: k * total.xx }
}

/// `|| f mu_s * g mu_s ||_2^2` for two profiles on the upper sheet.
pub fn bilinear_norm_sq<V: Sample>(f: &RadialProfile<V>, g: &RadialProfile<V>, res: &SliceResolution) -> f64 {
    half_gram(f.s(), &Sheets::upper(f), &Sheets::upper(g), res).aa
}

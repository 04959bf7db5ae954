//! L2 norms of convolution densities through the slice representation.
//!
//! For fixed `tau` and the offset `x` from the midpoint, write `D(x)`, `S(x)`
//! for the difference and sum of the two sphere radii and `C(x)` for the
//! cumulative integral of the symmetrised product. Both `D` and `S` increase
//! in `x`, so `J(rho) = C(D^{-1} rho) - C(S^{-1} rho)` and
//!
//! `int J^2 drho = int C^2 dD + (S(0) - D(W)) C(W)^2 + int (C(W) - C)^2 dS`.
//!
//! Integrals in `x` use a uniform grid with trapezoidal cumulation and a
//! Stieltjes trapezoid in `D` and `S`; integrals in `tau` use composite
//! Gauss–Legendre. The discrete functional is a polynomial in the node values,
//! so its gradient is exact.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::coords::phi;
use crate::error::{CoreError, Result};
use crate::profile::{Locator, RadialProfile, Sample};
use crate::quadrature::GaussLegendre;

const CHUNK: usize = 32;

/// Step sizes of the discrete slice functional.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SliceResolution {
    pub tau_step: f64,
    pub x_step: f64,
    pub order: usize,
}

impl SliceResolution {
    /// Steps tied to a reference height spacing `h`.
    pub fn from_spacing(h: f64) -> Self {
        Self {
            tau_step: 2.0 * h,
            x_step: 0.5 * h,
            order: 4,
        }
    }

    /// Resolution following the coarser of the two height grids, refined by `refine`.
    pub fn for_profiles<V: Sample>(f: &RadialProfile<V>, g: &RadialProfile<V>, refine: f64) -> Self {
        let spacing = |p: &RadialProfile<V>| {
            let (a, b) = p.t_range();
            (b - a) / (p.len() - 1) as f64
        };
        Self::from_spacing(spacing(f).min(spacing(g)) / refine)
    }
}

struct TauNodes {
    nodes: Vec<(f64, f64)>,
}

impl TauNodes {
    fn new(lo: f64, hi: f64, res: &SliceResolution) -> Self {
        let gl = GaussLegendre::new(res.order);
        let n = ((hi - lo) / res.tau_step).ceil().max(1.0) as usize;
        let nodes = (0..n)
            .flat_map(|i| {
                let a = lo + (hi - lo) * i as f64 / n as f64;
                let b = lo + (hi - lo) * (i + 1) as f64 / n as f64;
                gl.on(a, b).collect::<Vec<_>>()
            })
            .collect();
        Self { nodes }
    }
}

struct Slab {
    half: f64,
    delta: f64,
    x: Vec<f64>,
    d: Vec<f64>,
    sg: Vec<f64>,
}

fn slab(s: f64, tau: f64, w: f64, x_step: f64) -> Slab {
    let m = ((w / x_step).ceil() as usize).max(4);
    let delta = w / m as f64;
    let half = 0.5 * tau;
    let x: Vec<f64> = (0..=m).map(|k| if k == m { w } else { k as f64 * delta }).collect();
    let (d, sg) = x
        .iter()
        .map(|&x| {
            let (a, b) = (phi(s, half + x), phi(s, half - x));
            (a - b, a + b)
        })
        .unzip();
    Slab { half, delta, x, d, sg }
}

fn slab_value<V: Sample>(sl: &Slab, p: &[V]) -> f64 {
    let m = p.len() - 1;
    let mut c = Vec::with_capacity(m + 1);
    let mut acc = V::zero();
    c.push(acc);
    for k in 0..m {
        acc = acc + (p[k] + p[k + 1]).scale(0.5 * sl.delta);
        c.push(acc);
    }
    let cw = c[m];
    let mut v = (sl.sg[0] - sl.d[m]) * cw.abs2();
    for k in 0..m {
        v += 0.5 * (sl.d[k + 1] - sl.d[k]) * (c[k].abs2() + c[k + 1].abs2());
        v += 0.5 * (sl.sg[k + 1] - sl.sg[k]) * ((cw - c[k]).abs2() + (cw - c[k + 1]).abs2());
    }
    v
}

fn support<V: Sample>(f: &RadialProfile<V>, g: &RadialProfile<V>) -> (f64, f64, f64, f64) {
    let (f0, f1) = f.t_range();
    let (g0, g1) = g.t_range();
    (f0 + g0, f1 + g1, f0.min(g0), f1.max(g1))
}

/// `|| f mu_s * g mu_s ||_{L2(R^4)}^2` of the discrete slice functional.
pub fn sliced_norm_sq<V: Sample>(f: &RadialProfile<V>, g: &RadialProfile<V>, res: &SliceResolution) -> Result<f64> {
    if f.s() != g.s() {
        return Err(CoreError::MassMismatch(f.s(), g.s()));
    }
    let s = f.s();
    let (lo, hi, t_min, t_max) = support(f, g);
    let taus = TauNodes::new(lo, hi, res);
    let partial: Vec<f64> = taus
        .nodes
        .par_chunks(CHUNK)
        .map(|chunk| {
            chunk
                .iter()
                .map(|&(tau, wt)| {
                    let w = (t_max - 0.5 * tau).min(0.5 * tau - t_min);
                    if w <= 0.0 {
                        return 0.0;
                    }
                    let sl = slab(s, tau, w, res.x_step);
                    let p: Vec<V> = sl
                        .x
                        .iter()
                        .map(|&x| {
                            let (a, b) = (sl.half + x, sl.half - x);
                            f.eval_height(a) * g.eval_height(b) + f.eval_height(b) * g.eval_height(a)
                        })
                        .collect();
                    wt * slab_value(&sl, &p)
                })
                .sum::<f64>()
        })
        .collect();
    Ok(16.0 * PI.powi(3) * partial.iter().sum::<f64>())
}

/// `|| f mu_s * f mu_s ||_2^2` and its gradient with respect to the node values.
pub fn sliced_norm_sq_grad(f: &RadialProfile<f64>, res: &SliceResolution) -> (f64, Vec<f64>) {
    let s = f.s();
    let n = f.len();
    let (lo, hi, t_min, t_max) = support(f, f);
    let taus = TauNodes::new(lo, hi, res);
    let vals = f.values();
    let partial: Vec<(f64, Vec<f64>)> = taus
        .nodes
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut grad = vec![0.0; n];
            let mut total = 0.0;
            for &(tau, wt) in chunk {
                let w = (t_max - 0.5 * tau).min(0.5 * tau - t_min);
                if w <= 0.0 {
                    continue;
                }
                let sl = slab(s, tau, w, res.x_step);
                let m = sl.d.len() - 1;
                let mut la = Vec::with_capacity(m + 1);
                let mut lb = Vec::with_capacity(m + 1);
                let mut fa = Vec::with_capacity(m + 1);
                let mut fb = Vec::with_capacity(m + 1);
                for &x in &sl.x {
                    let a = f.locate_height(sl.half + x);
                    let b = f.locate_height(sl.half - x);
                    fa.push(blend(vals, a));
                    fb.push(blend(vals, b));
                    la.push(a);
                    lb.push(b);
                }
                let p: Vec<f64> = (0..=m).map(|k| 2.0 * fa[k] * fb[k]).collect();
                let mut c = vec![0.0; m + 1];
                for k in 0..m {
                    c[k + 1] = c[k] + 0.5 * sl.delta * (p[k] + p[k + 1]);
                }
                let cw = c[m];
                let dd = |k: usize| sl.d[k + 1] - sl.d[k];
                let ds = |k: usize| sl.sg[k + 1] - sl.sg[k];
                let mid = sl.sg[0] - sl.d[m];
                let mut val = mid * cw * cw;
                let mut gc = vec![0.0; m + 1];
                for k in 0..m {
                    val += 0.5 * dd(k) * (c[k] * c[k] + c[k + 1] * c[k + 1]);
                    val += 0.5 * ds(k) * ((cw - c[k]).powi(2) + (cw - c[k + 1]).powi(2));
                    let dsum = dd(k) + if k > 0 { dd(k - 1) } else { 0.0 };
                    let ssum = ds(k) + if k > 0 { ds(k - 1) } else { 0.0 };
                    gc[k] = c[k] * dsum - (cw - c[k]) * ssum;
                    gc[m] += ds(k) * (2.0 * cw - c[k] - c[k + 1]);
                }
                gc[m] += dd(m - 1) * cw + 2.0 * mid * cw;
                total += wt * val;
                // back through the cumulative trapezoid
                let mut suffix = vec![0.0; m + 2];
                for k in (0..=m).rev() {
                    suffix[k] = suffix[k + 1] + gc[k];
                }
                let scale = wt * 16.0 * PI.powi(3);
                for j in 0..=m {
                    let dp = if j == 0 {
                        0.5 * sl.delta * suffix[1]
                    } else {
                        sl.delta * suffix[j + 1] + 0.5 * sl.delta * gc[j]
                    };
                    let dp = scale * dp * 2.0;
                    scatter(&mut grad, la[j], dp * fb[j]);
                    scatter(&mut grad, lb[j], dp * fa[j]);
                }
            }
            (total, grad)
        })
        .collect();
    let mut grad = vec![0.0; n];
    let mut total = 0.0;
    for (t, g) in partial {
        total += t;
        for (a, b) in grad.iter_mut().zip(g) {
            *a += b;
        }
    }
    (16.0 * PI.powi(3) * total, grad)
}

#[inline]
fn blend(vals: &[f64], loc: Option<Locator>) -> f64 {
    match loc {
        None => 0.0,
        Some(Locator { index, lambda }) if lambda == 0.0 => vals[index],
        Some(Locator { index, lambda }) => (1.0 - lambda) * vals[index] + lambda * vals[index + 1],
    }
}

#[inline]
fn scatter(grad: &mut [f64], loc: Option<Locator>, v: f64) {
    if let Some(Locator { index, lambda }) = loc {
        grad[index] += (1.0 - lambda) * v;
        if lambda > 0.0 {
            grad[index + 1] += lambda * v;
        }
    }
}

/// Mass `int h 4 pi rho^2` of the discrete slice functional's density,
/// `8 pi^2 int int P(x) (S^2 - D^2)/2 dx dtau`.
pub fn sliced_mass(f: &RadialProfile, g: &RadialProfile, res: &SliceResolution) -> Result<f64> {
    if f.s() != g.s() {
        return Err(CoreError::MassMismatch(f.s(), g.s()));
    }
    let s = f.s();
    let (lo, hi, t_min, t_max) = support(f, g);
    let taus = TauNodes::new(lo, hi, res);
    let total: f64 = taus
        .nodes
        .iter()
        .map(|&(tau, wt)| {
            let w = (t_max - 0.5 * tau).min(0.5 * tau - t_min);
            if w <= 0.0 {
                return 0.0;
            }
            let sl = slab(s, tau, w, res.x_step);
            let m = sl.d.len() - 1;
            let q: Vec<f64> = (0..=m)
                .map(|k| {
                    let x = sl.x[k];
                    let (a, b) = (sl.half + x, sl.half - x);
                    let p = f.eval_height(a) * g.eval_height(b) + f.eval_height(b) * g.eval_height(a);
                    p * 0.5 * (sl.sg[k] * sl.sg[k] - sl.d[k] * sl.d[k])
                })
                .collect();
            wt * (0..m).map(|k| 0.5 * sl.delta * (q[k] + q[k + 1])).sum::<f64>()
        })
        .sum();
    Ok(8.0 * PI * PI * total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gradient_matches_finite_differences() {
        let f = RadialProfile::height_uniform(1.0, 1.0, 6.0, 12, |r| (-(r - 2.0).powi(2)).exp() + 0.1).unwrap();
        let res = SliceResolution::for_profiles(&f, &f, 3.0);
        let (v, g) = sliced_norm_sq_grad(&f, &res);
        assert!((v - sliced_norm_sq(&f, &f, &res).unwrap()).abs() < 1e-11 * v);
        let scale = g.iter().map(|x| x.abs()).fold(0.0, f64::max);
        for i in [0, 3, 7, 11] {
            let h = 1e-5;
            let up = perturbed(&f, i, h);
            let dn = perturbed(&f, i, -h);
            let fd = (sliced_norm_sq(&up, &up, &res).unwrap() - sliced_norm_sq(&dn, &dn, &res).unwrap()) / (2.0 * h);
            assert!((fd - g[i]).abs() < 1e-6 * scale, "{i}: {fd} vs {}", g[i]);
        }
    }

    fn perturbed(f: &RadialProfile, i: usize, h: f64) -> RadialProfile {
        let mut v = f.values().to_vec();
        v[i] += h;
        f.with_values(v).unwrap()
    }
}

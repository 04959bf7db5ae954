//! Dyadic shells: bilinear decay between shells and the dyadic refinement of
//! the `L^4` bound.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use radial_core::profile::height_uniform_radii;
use radial_core::{RadialProfile, SliceResolution};
use rayon::prelude::*;
use serde::Serialize;

use crate::nodal::nodal_norm_sq;
use crate::slab::bilinear_norm_sq;
use crate::{ExtremizerError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ShellKind {
    Indicator,
    /// `sin^2` of the position across the shell.
    Bump,
}

/// Unit-norm profile on the radial shell `[r0, r1]`.
pub fn shell_profile(s: f64, r0: f64, r1: f64, nodes: usize, kind: ShellKind) -> Result<RadialProfile> {
    let f = RadialProfile::height_uniform(s, r0, r1, nodes, |r| match kind {
        ShellKind::Indicator => 1.0,
        ShellKind::Bump => (PI * (r - r0) / (r1 - r0)).sin().powi(2),
    })?;
    Ok(f.scaled(nodal_norm_sq(&f).sqrt().recip()))
}

/// Resolution tied to the finest height spacing of either profile.
pub fn fine_resolution(f: &RadialProfile, g: &RadialProfile, refine: f64) -> SliceResolution {
    let spacing = |p: &RadialProfile| p.heights().windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    SliceResolution::from_spacing(spacing(f).min(spacing(g)) / refine)
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayTable {
    pub s: f64,
    pub kind: ShellKind,
    pub k_max: usize,
    /// `norms[k][k'] = || f_k mu_s * f_k' mu_s ||_2` for unit shells.
    pub norms: Vec<Vec<f64>>,
    /// Change of each entry under one resolution doubling, relative.
    pub resolution_error: f64,
    /// Pairs recomputed at a finer resolution.
    pub refined: Vec<(usize, usize)>,
    /// Least-squares fit `log2 norm = intercept + slope |k - k'|` over `|k - k'|` in `[1, 6]`.
    pub slope: f64,
    pub intercept: f64,
}

impl DecayTable {
    pub fn constant(&self) -> f64 {
        2f64.powf(self.intercept)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..=self.k_max).all(|i| (0..=self.k_max).all(|j| self.norms[i][j] == self.norms[j][i]))
    }
}

/// Tolerance on a pair's resolution change before it is refined once more.
pub const REFINE_TOL: f64 = 1e-3;

pub fn bilinear_dyadic_scan(s: f64, k_max: usize, kind: ShellKind, nodes: usize) -> Result<DecayTable> {
    if k_max < 4 || !(s > 0.0) || nodes < 8 {
        return Err(ExtremizerError::Domain(format!("need k_max >= 4, s > 0, nodes >= 8 (got {k_max}, {s}, {nodes})")));
    }
    let shells: Vec<RadialProfile> = (0..=k_max)
        .map(|k| {
            let r0 = s * 2f64.powi(k as i32);
            shell_profile(s, r0, 2.0 * r0, nodes, kind)
        })
        .collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..=k_max).flat_map(|i| (i..=k_max).map(move |j| (i, j))).collect();
    let values: Vec<(f64, f64, bool)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (f, g) = (&shells[i], &shells[j]);
            let coarse = bilinear_norm_sq(f, g, &fine_resolution(f, g, 1.0)).sqrt();
            let fine = bilinear_norm_sq(f, g, &fine_resolution(f, g, 2.0)).sqrt();
            let err = (fine - coarse).abs() / fine;
            if err > REFINE_TOL {
                let finer = bilinear_norm_sq(f, g, &fine_resolution(f, g, 4.0)).sqrt();
                (finer, (finer - fine).abs() / finer, true)
            } else {
                (fine, err, false)
            }
        })
        .collect();
    let mut norms = vec![vec![0.0; k_max + 1]; k_max + 1];
    let mut refined = Vec::new();
    let mut resolution_error: f64 = 0.0;
    for (&(i, j), &(v, e, r)) in pairs.iter().zip(&values) {
        norms[i][j] = v;
        norms[j][i] = v;
        resolution_error = resolution_error.max(e);
        if r {
            refined.push((i, j));
        }
    }
    let pts: Vec<(f64, f64)> = pairs
        .iter()
        .filter(|(i, j)| (1..=6).contains(&(j - i)))
        .map(|&(i, j)| ((j - i) as f64, norms[i][j].log2()))
        .collect();
    let (slope, intercept) = line_fit(&pts);
    Ok(DecayTable { s, kind, k_max, norms, resolution_error, refined, slope, intercept })
}

fn line_fit(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Pieces `f_k = f 1{2^k <= r < 2^{k+1}}` at `s = 1`, cut at the nodes.
#[derive(Clone, Debug)]
pub struct DyadicDecomposition {
    pub pieces: Vec<(i32, RadialProfile)>,
}

impl DyadicDecomposition {
    pub fn new(f: &RadialProfile) -> Self {
        let k_of = |r: f64| r.log2().floor() as i32;
        let radii = f.radii();
        let (k0, k1) = (k_of(radii[0]), k_of(*radii.last().unwrap()));
        let pieces = (k0..=k1)
            .filter_map(|k| {
                let v: Vec<f64> = radii
                    .iter()
                    .zip(f.values())
                    .map(|(&r, &x)| if k_of(r) == k { x } else { 0.0 })
                    .collect();
                v.iter().any(|&x| x != 0.0).then(|| (k, f.with_values(v).expect("same grid")))
            })
            .collect();
        Self { pieces }
    }

    pub fn norms(&self) -> Vec<f64> {
        self.pieces.iter().map(|(_, p)| nodal_norm_sq(p).sqrt()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Refinement {
    /// `||T f||_4 = 2 pi || f mu * f mu ||_2^{1/2}`.
    pub lhs: f64,
    /// `(sum_k ||f_k||^3)^{1/3}`.
    pub rhs3: f64,
    /// `sup_k ||f_k||^{1/3} ||f||^{2/3}`.
    pub rhs_sup: f64,
    pub norm: f64,
}

impl Refinement {
    pub fn constant3(&self) -> f64 {
        self.lhs / self.rhs3
    }

    pub fn constant_sup(&self) -> f64 {
        self.lhs / self.rhs_sup
    }
}

pub fn dyadic_refinement_check(f: &RadialProfile, refine: f64) -> Result<Refinement> {
    if f.s() != 1.0 || f.radii()[0] < 1.0 {
        return Err(ExtremizerError::Domain("refinement check needs s = 1 and support in [1, R]".into()));
    }
    let norm = nodal_norm_sq(f).sqrt();
    if !(norm > 0.0) {
        return Err(ExtremizerError::Domain("zero profile".into()));
    }
    let dec = DyadicDecomposition::new(f);
    let norms = dec.norms();
    let rhs3 = norms.iter().map(|n| n.powi(3)).sum::<f64>().cbrt();
    let rhs_sup = norms.iter().fold(0.0, |m: f64, n| m.max(*n)).cbrt() * norm.powf(2.0 / 3.0);
    let n = bilinear_norm_sq(f, f, &fine_resolution(f, f, refine));
    Ok(Refinement { lhs: 2.0 * PI * n.powf(0.25), rhs3, rhs_sup, norm })
}

/// Radii covering the shells `[2^k, 2^{k+1}]`, `k < shells`, with `nodes`
/// height-uniform nodes per shell and the dyadic radii as shared nodes.
pub fn dyadic_grid(shells: usize, nodes: usize) -> Result<Vec<f64>> {
    let mut radii = vec![1.0];
    for k in 0..shells {
        let r0 = 2f64.powi(k as i32);
        radii.extend(height_uniform_radii(1.0, r0, 2.0 * r0, nodes)?.into_iter().skip(1));
    }
    Ok(radii)
}

/// Random nonnegative profile on a random subset of shells, each a bump of
/// random amplitude, centre and width.
pub fn random_multishell(radii: &[f64], shells: usize, rng: &mut impl Rng) -> Result<RadialProfile> {
    let active: Vec<usize> = loop {
        let a: Vec<usize> = (0..shells).filter(|_| rng.random_bool(0.5)).collect();
        if !a.is_empty() {
            break a;
        }
    };
    let bumps: Vec<(usize, f64, f64, f64)> = active
        .iter()
        .map(|&k| (k, rng.random_range(0.05..1.0), rng.random_range(0.2..0.8), rng.random_range(0.1..0.5)))
        .collect();
    RadialProfile::from_fn(1.0, radii.to_vec(), |r| {
        let k = r.log2().floor() as usize;
        bumps
            .iter()
            .filter(|b| b.0 == k)
            .map(|&(k, amp, c, w)| {
                let u = r / 2f64.powi(k as i32) - 1.0;
                amp * (-((u - c) / w).powi(2)).exp() * (PI * u).sin().max(0.0)
            })
            .sum()
    })
    .map_err(Into::into)
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusStats {
    pub samples: usize,
    pub max_constant3: f64,
    pub max_constant_sup: f64,
    /// Same corpus with twice the nodes per shell.
    pub max_constant3_refined: f64,
}

pub fn refinement_corpus(samples: usize, shells: usize, nodes: usize, seed: u64) -> Result<CorpusStats> {
    let coarse = dyadic_grid(shells, nodes)?;
    let fine = dyadic_grid(shells, 2 * nodes - 1)?;
    let rows: Vec<(f64, f64, f64)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let f = random_multishell(&coarse, shells, &mut rng.clone())?;
            let g = random_multishell(&fine, shells, &mut rng)?;
            let a = dyadic_refinement_check(&f, 1.0)?;
            let b = dyadic_refinement_check(&g, 1.0)?;
            Ok((a.constant3(), a.constant_sup(), b.constant3()))
        })
        .collect::<Result<_>>()?;
    let max = |j: usize| rows.iter().map(|r| [r.0, r.1, r.2][j]).fold(0.0, f64::max);
    Ok(CorpusStats { samples, max_constant3: max(0), max_constant_sup: max(1), max_constant3_refined: max(2) })
}

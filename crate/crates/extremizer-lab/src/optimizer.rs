//! Projected gradient ascent of `Q` over nonnegative radial profiles.
//!
//! Profiles live on a fixed height-uniform grid; `Q = N / M^2` with `N` the
//! discrete slice functional and `M = sum w_i f_i^2` the nodal norm. Steps are
//! taken along the gradient in the metric of `M` from the unit sphere of `M`;
//! the step `1 / (4 N)` maps `f` to a multiple of `grad N / w`, and the line
//! search starts from the last accepted step and halves until `Q` increases.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use radial_core::profile::height_uniform_radii;
use radial_core::{psi, sliced_norm_sq, sliced_norm_sq_grad, RadialProfile, SliceResolution};
use rayon::prelude::*;
use serde::Serialize;

use crate::nodal::nodal_weights;
use crate::{ExtremizerError, Result};

const MAX_SCALE: f64 = 64.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchConfig {
    pub s: f64,
    pub grid_size: usize,
    pub r_max: f64,
    pub restarts: usize,
    pub iters: usize,
    pub seed: u64,
    /// Stop once a step improves `Q` by less than this, relatively.
    pub rel_tol: f64,
    /// Halt after this many consecutive steps without increase.
    pub stall: usize,
    /// Rates of the `f_a` family scanned for the baseline and first start.
    pub trial_rates: Vec<f64>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            s: 1.0,
            grid_size: 400,
            r_max: 40.0,
            restarts: 5,
            iters: 2000,
            seed: 1,
            rel_tol: 1e-9,
            stall: 50,
            trial_rates: (1..=30).map(|k| 0.02 * k as f64).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Start {
    Trial,
    Shell,
    LogNormal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Stop {
    Converged,
    IterationCap,
    Stagnation,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TraceEntry {
    pub restart: usize,
    pub iter: usize,
    pub q: f64,
    pub step: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RestartReport {
    pub start: Start,
    pub q_initial: f64,
    pub q_final: f64,
    pub iterations: usize,
    pub stop: Stop,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub f_star: RadialProfile,
    pub q_star: f64,
    /// Best rate of the trial family and its `Q` on the search grid.
    pub trial_best: (f64, f64),
    pub restarts: Vec<RestartReport>,
    pub trace: Vec<TraceEntry>,
}

struct Problem {
    grid: RadialProfile,
    weights: Vec<f64>,
    res: SliceResolution,
}

impl Problem {
    fn new(cfg: &SearchConfig) -> Result<Self> {
        let radii = height_uniform_radii(cfg.s, cfg.s, cfg.r_max, cfg.grid_size)?;
        let grid = RadialProfile::new(cfg.s, radii.clone(), vec![1.0; radii.len()])?;
        let weights = nodal_weights(&grid);
        let res = SliceResolution::for_profiles(&grid, &grid, 1.0);
        Ok(Self { grid, weights, res })
    }

    fn profile(&self, v: Vec<f64>) -> RadialProfile {
        self.grid.with_values(v).expect("finite values on the search grid")
    }

    fn mass(&self, v: &[f64]) -> f64 {
        self.weights.iter().zip(v).map(|(w, x)| w * x * x).sum()
    }

    fn normalized(&self, mut v: Vec<f64>) -> Vec<f64> {
        let k = self.mass(&v).sqrt().recip();
        v.iter_mut().for_each(|x| *x *= k);
        v
    }

    fn q(&self, v: &[f64]) -> Result<f64> {
        let m = self.mass(v);
        if !(m > 0.0) {
            return Err(ExtremizerError::Domain("zero profile".into()));
        }
        let f = self.profile(v.to_vec());
        Ok(sliced_norm_sq(&f, &f, &self.res)? / (m * m))
    }

    /// `N` and its gradient at `v` with `M(v) = 1`, so that `N = Q`.
    fn n_grad(&self, v: &[f64]) -> Result<(f64, Vec<f64>)> {
        let (n, grad) = sliced_norm_sq_grad(&self.profile(v.to_vec()), &self.res);
        let bad: Vec<usize> = grad.iter().enumerate().filter(|(_, g)| !g.is_finite()).map(|(i, _)| i).collect();
        if !bad.is_empty() || !n.is_finite() {
            return Err(ExtremizerError::NonFinite { nodes: bad });
        }
        Ok((n, grad))
    }

    fn from_fn(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.normalized(self.grid.radii().iter().map(|&r| f(r)).collect())
    }
}

fn ascend(p: &Problem, v0: Vec<f64>, restart: usize, cfg: &SearchConfig) -> Result<(Vec<f64>, f64, Vec<TraceEntry>, Stop)> {
    let mut v = p.normalized(v0);
    let (mut n, mut grad) = p.n_grad(&v)?;
    let mut q = n;
    let mut trace = vec![TraceEntry { restart, iter: 0, q, step: 0.0 }];
    let mut scale = 1.0;
    let mut flat = 0;
    for iter in 1..=cfg.iters {
        // gradient of Q on the unit sphere of M, in the metric of M
        let dir: Vec<f64> = grad.iter().zip(&v).zip(&p.weights).map(|((g, x), w)| g / w - 4.0 * n * x).collect();
        let base = 1.0 / (4.0 * n);
        let mut accepted = None;
        let mut k = scale;
        for _ in 0..30 {
            let trial: Vec<f64> = v.iter().zip(&dir).map(|(x, d)| (x + k * base * d).max(0.0)).collect();
            if p.mass(&trial) > 0.0 {
                let t = p.normalized(trial);
                let (nt, gt) = p.n_grad(&t)?;
                if nt > q {
                    accepted = Some((t, nt, gt));
                    break;
                }
            }
            k *= 0.5;
        }
        match accepted {
            Some((t, nt, gt)) => {
                let gain = (nt - q) / q;
                v = t;
                n = nt;
                grad = gt;
                q = nt;
                trace.push(TraceEntry { restart, iter, q, step: k * base });
                flat = 0;
                scale = (2.0 * k).min(MAX_SCALE);
                if gain < cfg.rel_tol {
                    return Ok((v, q, trace, Stop::Converged));
                }
            }
            None => {
                flat += 1;
                trace.push(TraceEntry { restart, iter, q, step: 0.0 });
                if flat >= cfg.stall {
                    return Ok((v, q, trace, Stop::Stagnation));
                }
                scale = 1.0;
            }
        }
    }
    Ok((v, q, trace, Stop::IterationCap))
}

/// `Q` of the trial family on the search grid, `(a, Q(f_a))` per rate.
pub fn trial_scan(cfg: &SearchConfig) -> Result<Vec<(f64, f64)>> {
    let p = Problem::new(cfg)?;
    cfg.trial_rates
        .par_iter()
        .map(|&a| Ok((a, p.q(&p.from_fn(|r| (-0.5 * a * psi(cfg.s, r)).exp()))?)))
        .collect()
}

fn start_values(p: &Problem, cfg: &SearchConfig, restart: usize, trial_a: f64) -> (Start, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(restart as u64);
    let s = cfg.s;
    let span = cfg.r_max / s.max(f64::MIN_POSITIVE);
    match restart {
        0 => (Start::Trial, p.from_fn(|r| (-0.5 * trial_a * psi(s, r)).exp())),
        1 => {
            let r1 = s.max(cfg.r_max * 1e-3) * span.powf(rng.random_range(0.0..0.5));
            let r2 = (r1 * rng.random_range(1.5..4.0)).min(cfg.r_max);
            (Start::Shell, p.from_fn(|r| if r >= r1 && r <= r2 { 1.0 } else { 0.0 }))
        }
        _ => {
            let mu = s.max(cfg.r_max * 1e-3).ln() + rng.random_range(0.0..0.6) * span.ln();
            let sigma = rng.random_range(0.3..1.2);
            (Start::LogNormal, p.from_fn(|r| (-(r.ln() - mu).powi(2) / (2.0 * sigma * sigma)).exp()))
        }
    }
}

pub fn maximize_radial(cfg: &SearchConfig) -> Result<SearchResult> {
    if cfg.grid_size < 64 || cfg.restarts == 0 || !(cfg.r_max > cfg.s) || cfg.trial_rates.is_empty() {
        return Err(ExtremizerError::Domain(format!(
            "need grid_size >= 64, at least one restart, r_max > s and trial rates (got {}, {}, {})",
            cfg.grid_size, cfg.restarts, cfg.r_max
        )));
    }
    let p = Problem::new(cfg)?;
    let scan = trial_scan(cfg)?;
    let trial_best = scan.iter().copied().fold((f64::NAN, f64::MIN), |b, x| if x.1 > b.1 { x } else { b });
    let runs: Vec<(RestartReport, Vec<f64>, Vec<TraceEntry>)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| {
            let (start, v0) = start_values(&p, cfg, i, trial_best.0);
            let (v, q, trace, stop) = ascend(&p, v0, i, cfg)?;
            let report = RestartReport { start, q_initial: trace[0].q, q_final: q, iterations: trace.len() - 1, stop };
            Ok((report, v, trace))
        })
        .collect::<Result<_>>()?;
    let best = runs
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .0.q_final.total_cmp(&b.1 .0.q_final))
        .map(|(i, _)| i)
        .expect("at least one restart");
    let q_star = runs[best].0.q_final;
    let f_star = p.profile(runs[best].1.clone());
    let mut restarts = Vec::new();
    let mut trace = Vec::new();
    for (r, _, t) in runs {
        restarts.push(r);
        trace.extend(t);
    }
    Ok(SearchResult { f_star, q_star, trial_best, restarts, trace })
}

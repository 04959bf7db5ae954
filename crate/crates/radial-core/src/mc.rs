//! Monte-Carlo estimates of pairings `<f mu * g mu, phi>` straight from the
//! definition: sample the two sheet points and evaluate the test function at
//! their sum. Shares no code with the slice quadratures.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::coords::phi;
use crate::profile::RadialProfile;

const CHUNK: u64 = 1 << 16;

/// Smooth compactly supported test function of `(|xi|, tau)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bump {
    pub rho0: f64,
    pub rho_width: f64,
    pub tau0: f64,
    pub tau_width: f64,
    /// Multiply by `xi_1 / |xi|`, making the test function odd under `xi -> -xi`.
    pub odd: bool,
}

/// `exp(1 - 1/(1 - x^2))` on `|x| < 1`, with peak value 1.
#[inline]
pub fn bump1(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - x * x)).exp()
    }
}

impl Bump {
    pub fn new(rho0: f64, rho_width: f64, tau0: f64, tau_width: f64) -> Self {
        Self {
            rho0,
            rho_width,
            tau0,
            tau_width,
            odd: false,
        }
    }

    pub fn odd(mut self) -> Self {
        self.odd = true;
        self
    }

    /// Radial part as a function of `(rho, tau)`.
    pub fn radial(&self, rho: f64, tau: f64) -> f64 {
        bump1((rho - self.rho0) / self.rho_width) * bump1((tau - self.tau0) / self.tau_width)
    }

    pub fn eval(&self, xi: [f64; 3], tau: f64) -> f64 {
        let rho = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
        let v = self.radial(rho, tau);
        if self.odd && v != 0.0 {
            v * xi[0] / rho
        } else {
            v
        }
    }
}

/// Monte-Carlo estimate with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: u64,
}

impl McEstimate {
    /// Number of standard errors separating the estimate from `value`.
    pub fn sigmas_from(&self, value: f64) -> f64 {
        (self.estimate - value).abs() / self.std_error.max(f64::MIN_POSITIVE)
    }
}

/// Which sheet carries the second factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sheets {
    /// Both points on the upper sheet: `f mu * g mu`.
    Upper,
    /// Second point on the lower sheet: `f mu_+ * g mu_-`.
    Opposite,
}

struct SheetSampler<'a> {
    f: &'a RadialProfile,
    t0: f64,
    span: f64,
}

impl<'a> SheetSampler<'a> {
    fn new(f: &'a RadialProfile) -> Self {
        let (t0, t1) = f.t_range();
        Self { f, t0, span: t1 - t0 }
    }

    /// Point on the sheet and its importance weight against `mu_s`.
    fn draw(&self, rng: &mut ChaCha8Rng) -> ([f64; 3], f64, f64) {
        let t = self.t0 + self.span * rng.random::<f64>();
        let r = phi(self.f.s(), t);
        let z: f64 = 2.0 * rng.random::<f64>() - 1.0;
        let a = 2.0 * PI * rng.random::<f64>();
        let q = (1.0 - z * z).max(0.0).sqrt();
        let w = 4.0 * PI * r * self.span * self.f.eval_height(t);
        ([r * q * a.cos(), r * q * a.sin(), r * z], t, w)
    }
}

/// Estimates `<f mu_{s_f} * g mu_{s_g}, phi>` with `samples` pairs; the
/// profiles may carry different mass parameters. Streams are split per chunk
/// so results do not depend on the thread count.
pub fn mc_pairing_oracle(
    f: &RadialProfile,
    g: &RadialProfile,
    sheets: Sheets,
    test: &Bump,
    samples: u64,
    seed: u64,
) -> McEstimate {
    let sf = SheetSampler::new(f);
    let sg = SheetSampler::new(g);
    let chunks = samples.div_ceil(CHUNK);
    let sign = match sheets {
        Sheets::Upper => 1.0,
        Sheets::Opposite => -1.0,
    };
    let sums: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let n = CHUNK.min(samples - c * CHUNK);
            let (mut s1, mut s2) = (0.0, 0.0);
            for _ in 0..n {
                let (y, t, w) = sf.draw(&mut rng);
                let (z, u, v) = sg.draw(&mut rng);
                let x = [y[0] + z[0], y[1] + z[1], y[2] + z[2]];
                let val = w * v * test.eval(x, t + sign * u);
                s1 += val;
                s2 += val * val;
            }
            (s1, s2)
        })
        .collect();
    let (s1, s2) = sums.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let n = samples.max(1) as f64;
    let mean = s1 / n;
    let var = (s2 / n - mean * mean).max(0.0);
    McEstimate {
        estimate: mean,
        std_error: (var / (n - 1.0).max(1.0)).sqrt(),
        samples,
    }
}

/// Estimates `<sigma_R * sigma_R2, phi>` for a test function of `|x|` alone.
pub fn mc_sphere_pair(r1: f64, r2: f64, test: impl Fn(f64) -> f64 + Sync, samples: u64, seed: u64) -> McEstimate {
    let chunks = samples.div_ceil(CHUNK);
    let unit = |rng: &mut ChaCha8Rng| {
        let z: f64 = 2.0 * rng.random::<f64>() - 1.0;
        let a = 2.0 * PI * rng.random::<f64>();
        let q = (1.0 - z * z).max(0.0).sqrt();
        [q * a.cos(), q * a.sin(), z]
    };
    let mass = 16.0 * PI * PI * r1 * r2;
    let sums: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let n = CHUNK.min(samples - c * CHUNK);
            let (mut s1, mut s2) = (0.0, 0.0);
            for _ in 0..n {
                let (a, b) = (unit(&mut rng), unit(&mut rng));
                let x = [r1 * a[0] + r2 * b[0], r1 * a[1] + r2 * b[1], r1 * a[2] + r2 * b[2]];
                let v = mass * test((x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt());
                s1 += v;
                s2 += v * v;
            }
            (s1, s2)
        })
        .collect();
    let (s1, s2) = sums.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let n = samples.max(1) as f64;
    let mean = s1 / n;
    McEstimate {
        estimate: mean,
        std_error: ((s2 / n - mean * mean).max(0.0) / (n - 1.0).max(1.0)).sqrt(),
        samples,
    }
}

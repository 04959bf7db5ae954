//! One-dimensional quadrature: fixed Gauss–Legendre rules and a globally
//! adaptive Gauss–Kronrod (10, 21) integrator with user breakpoints.

use std::f64::consts::PI;

use crate::scalar::Real;

/// Which rule an integral is carried out with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    /// Adaptive Gauss–Kronrod 21 with global bisection.
    GaussKronrod21,
    /// Fixed composite Gauss–Legendre with the given number of nodes per panel.
    GaussLegendre(usize),
}

/// Tolerances and limits governing every integral of a computation.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub rule: Rule,
    pub rel_tol: f64,
    pub max_depth: u32,
    /// Truncation radius for profiles and fields.
    pub r_max: f64,
    /// Base seed for Monte-Carlo estimates.
    pub seed: u64,
    /// Monte-Carlo sample count.
    pub samples: u64,
}

pub const DEFAULT_SEED: u64 = 0x5EED;

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rule: Rule::GaussKronrod21,
            rel_tol: 1e-8,
            max_depth: 20,
            r_max: 40.0,
            seed: DEFAULT_SEED,
            samples: 10_000_000,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn adaptive(&self) -> Adaptive<f64> {
        Adaptive {
            rel_tol: self.rel_tol,
            abs_tol: 0.0,
            max_depth: self.max_depth,
        }
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1].
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped onto [a, b].
    pub fn on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (c + h * x, h * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.on(a, b).map(|(x, w)| w * f(x)).sum()
    }

    /// Composite rule over consecutive breakpoints.
    pub fn composite<F: FnMut(f64) -> f64>(&self, points: &[f64], mut f: F) -> f64 {
        points
            .windows(2)
            .map(|p| self.integrate(p[0], p[1], &mut f))
            .sum()
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_208_067_413,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

/// Tolerances for [`integrate`].
#[derive(Clone, Copy, Debug)]
pub struct Adaptive<T = f64> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_depth: u32,
}

impl<T: Real> Default for Adaptive<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::lit(1e-10),
            abs_tol: T::zero(),
            max_depth: 30,
        }
    }
}

impl<T: Real> Adaptive<T> {
    pub fn rel(rel_tol: T) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    pub fn with_abs(mut self, abs_tol: T) -> Self {
        self.abs_tol = abs_tol;
        self
    }
}

/// Result of an adaptive integral.
#[derive(Clone, Copy, Debug)]
pub struct Integral<T = f64> {
    pub value: T,
    pub error: T,
    pub converged: bool,
    pub evals: usize,
}

struct Segment<T> {
    a: T,
    b: T,
    value: T,
    error: T,
    depth: u32,
}

fn gk21<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> (T, T) {
    let c = (a + b) / T::lit(2.0);
    let h = (b - a) / T::lit(2.0);
    let fc = f(c);
    let mut kronrod = fc * T::lit(WGK[10]);
    let mut gauss = T::zero();
    for j in 0..10 {
        let dx = h * T::lit(XGK[j]);
        let pair = f(c - dx) + f(c + dx);
        kronrod = kronrod + T::lit(WGK[j]) * pair;
        if j % 2 == 1 {
            gauss = gauss + T::lit(WG[j / 2]) * pair;
        }
    }
    let value = kronrod * h;
    let error = ((kronrod - gauss) * h).abs();
    (value, error)
}

/// Adaptive integral over [a, b].
pub fn integrate<T: Real, F: FnMut(T) -> T>(f: F, a: T, b: T, opts: &Adaptive<T>) -> Integral<T> {
    integrate_breaks(f, &[a, b], opts)
}

/// Adaptive integral over consecutive breakpoints; integrand kinks placed on
/// breakpoints are never sampled across.
pub fn integrate_breaks<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    points: &[T],
    opts: &Adaptive<T>,
) -> Integral<T> {
    let mut segs: Vec<Segment<T>> = Vec::new();
    let mut evals = 0;
    for p in points.windows(2) {
        if p[1] > p[0] {
            let (value, error) = gk21(&mut f, p[0], p[1]);
            evals += 21;
            segs.push(Segment {
                a: p[0],
                b: p[1],
                value,
                error,
                depth: 0,
            });
        }
    }
    loop {
        let total: T = segs.iter().map(|s| s.value).sum();
        let err: T = segs.iter().map(|s| s.error).sum();
        let tol = opts.abs_tol.max(opts.rel_tol * total.abs());
        if err <= tol || !err.is_finite() {
            return Integral {
                value: total,
                error: err,
                converged: err.is_finite(),
                evals,
            };
        }
        let worst = segs
            .iter()
            .enumerate()
            .filter(|(_, s)| s.depth < opts.max_depth)
            .max_by(|x, y| x.1.error.partial_cmp(&y.1.error).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(i, _)| i);
        let Some(i) = worst else {
            return Integral {
                value: total,
                error: err,
                converged: false,
                evals,
            };
        };
        // a segment whose error is already at rounding level cannot be improved
        if segs[i].error <= T::epsilon() * T::lit(50.0) * segs[i].value.abs() {
            return Integral {
                value: total,
                error: err,
                converged: true,
                evals,
            };
        }
        let s = segs.swap_remove(i);
        let m = (s.a + s.b) / T::lit(2.0);
        let (v1, e1) = gk21(&mut f, s.a, m);
        let (v2, e2) = gk21(&mut f, m, s.b);
        evals += 42;
        segs.push(Segment {
            a: s.a,
            b: m,
            value: v1,
            error: e1,
            depth: s.depth + 1,
        });
        segs.push(Segment {
            a: m,
            b: s.b,
            value: v2,
            error: e2,
            depth: s.depth + 1,
        });
    }
}

/// Integral over [a, inf) by the map x = a + u/(1-u) on [0, 1).
pub fn integrate_to_infinity<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    a: T,
    opts: &Adaptive<T>,
) -> Integral<T> {
    let one = T::one();
    integrate(
        |u: T| {
            if u >= one {
                return T::zero();
            }
            let w = one - u;
            let v = f(a + u / w) / (w * w);
            if v.is_finite() {
                v
            } else {
                T::zero()
            }
        },
        T::zero(),
        one,
        opts,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let gl = GaussLegendre::new(8);
        let v = gl.integrate(-1.0, 2.0, |x| x.powi(15) - 3.0 * x.powi(4));
        let exact = (2f64.powi(16) - 1.0) / 16.0 - 3.0 * (32.0 + 1.0) / 5.0;
        assert!((v - exact).abs() < 1e-9 * exact.abs());
        let w: f64 = GaussLegendre::new(31).on(0.0, 1.0).map(|(_, w)| w).sum();
        assert!((w - 1.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_sqrt_endpoint() {
        let r = integrate(|x: f64| x.sqrt(), 0.0, 1.0, &Adaptive::rel(1e-12));
        assert!(r.converged);
        assert!((r.value - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn adaptive_in_single_precision() {
        let r = integrate(|x: f32| x.cos(), 0.0, 1.0, &Adaptive::rel(1e-6));
        assert!((r.value - 1f32.sin()).abs() < 1e-5);
    }

    #[test]
    fn breakpoints_resolve_kinks() {
        let r = integrate_breaks(|x: f64| (x - 0.3).abs(), &[0.0, 0.3, 1.0], &Adaptive::rel(1e-13));
        assert!((r.value - (0.045 + 0.245)).abs() < 1e-14);
        assert!(r.evals <= 42);
    }

    #[test]
    fn semi_infinite() {
        let r = integrate_to_infinity(|x: f64| (-x).exp(), 1.0, &Adaptive::rel(1e-11));
        assert!((r.value - (-1f64).exp()).abs() < 1e-11);
    }
}

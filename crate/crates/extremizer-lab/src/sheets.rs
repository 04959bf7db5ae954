//! Functions on the full hyperboloid `t^2 = |x|^2 - s^2` as pairs of radial
//! profiles on its upper and lower halves.

use radial_core::{RadialProfile, Sample, SliceResolution};
use serde::Serialize;

use crate::nodal::nodal_weights;
use crate::slab::{half_gram, Sheets};
use crate::{ExtremizerError, Result};

/// `f = f_+ + f_-` with `f_+` on `t >= 0` and `f_-` on `t <= 0`, both given
/// as functions of `|y|` on one shared grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SheetPair<V: Sample = f64> {
    pub plus: RadialProfile<V>,
    pub minus: RadialProfile<V>,
}

impl<V: Sample> SheetPair<V> {
    pub fn new(plus: RadialProfile<V>, minus: RadialProfile<V>) -> Result<Self> {
        if plus.s() != minus.s() || plus.radii() != minus.radii() {
            return Err(ExtremizerError::Domain("sheets must share the mass parameter and grid".into()));
        }
        Ok(Self { plus, minus })
    }

    /// The pair `(f, f)`: even under `(x, t) -> (-x, -t)` for radial `f`.
    pub fn even(f: RadialProfile<V>) -> Self {
        Self { minus: f.clone(), plus: f }
    }

    /// `f_- = 0`.
    pub fn upper_only(f: RadialProfile<V>) -> Self {
        Self { minus: f.scaled(0.0), plus: f }
    }

    pub fn s(&self) -> f64 {
        self.plus.s()
    }

    /// `(x, t) -> (-x, -t)`, which for radial sheets exchanges them.
    pub fn reflected(&self) -> Self {
        Self { plus: self.minus.clone(), minus: self.plus.clone() }
    }

    /// Nodal `||f||^2 = ||f_+||^2 + ||f_-||^2`.
    pub fn norm_sq(&self) -> f64 {
        nodal_weights(&self.plus)
            .iter()
            .zip(self.plus.values().iter().zip(self.minus.values()))
            .map(|(w, (p, m))| w * (p.abs2() + m.abs2()))
            .sum()
    }

    pub fn is_even(&self) -> bool {
        self.plus.values() == self.minus.values()
    }
}

/// The nonnegative `L^2` symmetrization `((|f(x,t)|^2 + |f(-x,-t)|^2) / 2)^{1/2}`.
pub fn symmetrize<V: Sample>(f: &SheetPair<V>) -> SheetPair<f64> {
    let v: Vec<f64> = f
        .plus
        .values()
        .iter()
        .zip(f.minus.values())
        .map(|(p, m)| (0.5 * (p.abs2() + m.abs2())).sqrt())
        .collect();
    let g = f.plus.with_values(v).expect("same grid, finite values");
    SheetPair::even(g)
}

/// Terms of `||f mu * f mu||_2^2 = ||A||^2 + ||B||^2 + 4 ||C||^2 + 4 <A, C> + 4 <C, B>`
/// with `A = f_+ mu_+ * f_+ mu_+`, `B = f_- mu_- * f_- mu_-`, `C = f_+ mu_+ * f_- mu_-`
/// (real parts of the inner products for complex `f`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FullTerms {
    pub aa: f64,
    pub bb: f64,
    pub cc: f64,
    pub ac: f64,
    pub cb: f64,
}

impl FullTerms {
    pub fn total(&self) -> f64 {
        self.aa + self.bb + 4.0 * self.cc + 4.0 * self.ac + 4.0 * self.cb
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FullQ {
    pub value: f64,
    pub numerator: f64,
    pub norm_sq: f64,
    pub terms: FullTerms,
}

fn present<V: Sample>(p: &RadialProfile<V>) -> Option<&RadialProfile<V>> {
    (p.max_abs() > 0.0).then_some(p)
}

/// `||f mu * f mu||_2^2` term by term at a given resolution.
pub fn full_terms<V: Sample>(f: &SheetPair<V>, res: &SliceResolution) -> FullTerms {
    let sheets = Sheets { upper: present(&f.plus), lower: present(&f.minus) };
    let up = half_gram(f.s(), &sheets, &sheets, res);
    let down = half_gram(f.s(), &sheets.swapped(), &sheets.swapped(), res);
    // the cross part carries both orderings, i.e. 2 C
    FullTerms {
        aa: up.aa,
        bb: down.aa,
        cc: 0.25 * (up.xx + down.xx),
        ac: 0.5 * up.ax,
        cb: 0.5 * down.ax,
    }
}

/// Resolution of the single-sheet engine for the grid of `f`.
pub fn resolution<V: Sample>(f: &RadialProfile<V>, refine: f64) -> SliceResolution {
    SliceResolution::for_profiles(f, f, refine)
}

/// `||f mu * f mu||_2^2 / ||f||_2^4` over the full hyperboloid.
pub fn full_q_ratio<V: Sample>(f: &SheetPair<V>) -> Result<FullQ> {
    let norm_sq = f.norm_sq();
    if !(norm_sq > 0.0) {
        return Err(ExtremizerError::Domain("zero function".into()));
    }
    let terms = full_terms(f, &resolution(&f.plus, 1.0));
    let numerator = terms.total();
    Ok(FullQ { value: numerator / (norm_sq * norm_sq), numerator, norm_sq, terms })
}

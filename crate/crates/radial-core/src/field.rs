//! Sampled convolution densities on a `(rho, tau)` grid, with CSV and a
//! small binary cache format.
//!
//! Binary layout (little endian): magic `H3CF`, `u32` rho count, `u32` tau
//! count, the rho grid and tau grid as `f64`, then the values as `f64` in
//! row-major order with one row per tau.

use std::io::{Read, Write};

use crate::error::{CoreError, Result};

const MAGIC: &[u8; 4] = b"H3CF";

/// Grid template for a field.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldGrid {
    pub rho: Vec<f64>,
    pub tau: Vec<f64>,
}

impl FieldGrid {
    pub fn new(rho: Vec<f64>, tau: Vec<f64>) -> Self {
        Self { rho, tau }
    }

    /// Uniform grid including both endpoints.
    pub fn uniform(rho: (f64, f64, usize), tau: (f64, f64, usize)) -> Self {
        Self::new(linspace(rho.0, rho.1, rho.2), linspace(tau.0, tau.1, tau.2))
    }

    pub fn cells(&self) -> usize {
        self.rho.len() * self.tau.len()
    }
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    b
                } else {
                    a + (b - a) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// Values `h(rho_i, tau_j)` of a radially symmetric density.
#[derive(Clone, Debug, PartialEq)]
pub struct Conv2DField {
    pub rho: Vec<f64>,
    pub tau: Vec<f64>,
    values: Vec<f64>,
}

impl Conv2DField {
    pub fn zeros(grid: &FieldGrid) -> Self {
        Self {
            rho: grid.rho.clone(),
            tau: grid.tau.clone(),
            values: vec![0.0; grid.cells()],
        }
    }

    pub fn from_rows(grid: &FieldGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.cells() {
            return Err(CoreError::Format(format!(
                "expected {} values, got {}",
                grid.cells(),
                values.len()
            )));
        }
        Ok(Self {
            rho: grid.rho.clone(),
            tau: grid.tau.clone(),
            values,
        })
    }

    pub fn from_fn(grid: &FieldGrid, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = grid
            .tau
            .iter()
            .flat_map(|&t| grid.rho.iter().map(move |&r| (r, t)))
            .map(|(r, t)| f(r, t))
            .collect();
        Self {
            rho: grid.rho.clone(),
            tau: grid.tau.clone(),
            values,
        }
    }

    pub fn grid(&self) -> FieldGrid {
        FieldGrid::new(self.rho.clone(), self.tau.clone())
    }

    #[inline]
    pub fn get(&self, i_rho: usize, j_tau: usize) -> f64 {
        self.values[j_tau * self.rho.len() + i_rho]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Entrywise combination of two fields on the same grid.
    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.rho != other.rho || self.tau != other.tau {
            return Err(CoreError::Format("fields live on different grids".into()));
        }
        Ok(Self {
            rho: self.rho.clone(),
            tau: self.tau.clone(),
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["rho", "tau", "value"])?;
        for (j, &t) in self.tau.iter().enumerate() {
            for (i, &r) in self.rho.iter().enumerate() {
                out.write_record([fmt17(r), fmt17(t), fmt17(self.get(i, j))])?;
            }
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let mut rows = Vec::new();
        for rec in rdr.deserialize::<(f64, f64, f64)>() {
            rows.push(rec?);
        }
        let mut tau: Vec<f64> = Vec::new();
        let mut rho: Vec<f64> = Vec::new();
        for &(r, t, _) in &rows {
            if tau.last() != Some(&t) {
                tau.push(t);
            }
            if tau.len() == 1 {
                rho.push(r);
            }
        }
        let grid = FieldGrid::new(rho, tau);
        if grid.cells() != rows.len() {
            return Err(CoreError::Format("CSV is not a complete tau-major grid".into()));
        }
        Self::from_rows(&grid, rows.into_iter().map(|x| x.2).collect())
    }

    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(MAGIC)?;
        for n in [self.rho.len(), self.tau.len()] {
            let n = u32::try_from(n).map_err(|_| CoreError::Format("grid too large".into()))?;
            w.write_all(&n.to_le_bytes())?;
        }
        for x in self.rho.iter().chain(&self.tau).chain(&self.values) {
            w.write_all(&x.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(CoreError::Format("bad magic, expected H3CF".into()));
        }
        let mut dims = [0usize; 2];
        for d in &mut dims {
            let mut b = [0u8; 4];
            r.read_exact(&mut b)?;
            *d = u32::from_le_bytes(b) as usize;
        }
        let mut read_vec = |n: usize| -> Result<Vec<f64>> {
            let mut out = Vec::with_capacity(n);
            let mut b = [0u8; 8];
            for _ in 0..n {
                r.read_exact(&mut b)?;
                out.push(f64::from_le_bytes(b));
            }
            Ok(out)
        };
        let rho = read_vec(dims[0])?;
        let tau = read_vec(dims[1])?;
        let values = read_vec(dims[0] * dims[1])?;
        Self::from_rows(&FieldGrid::new(rho, tau), values)
    }
}

/// Shortest round-trip formatting at 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Conv2DField {
        let g = FieldGrid::uniform((0.0, 2.0, 5), (0.5, 3.0, 4));
        Conv2DField::from_fn(&g, |r, t| (r * t).sin() / 3.0)
    }

    #[test]
    fn csv_round_trip_is_lossless() {
        let f = sample();
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        assert!(buf.starts_with(b"rho,tau,value\n"));
        assert_eq!(Conv2DField::read_csv(&buf[..]).unwrap(), f);
    }

    #[test]
    fn binary_round_trip() {
        let f = sample();
        let mut buf = Vec::new();
        f.write_binary(&mut buf).unwrap();
        assert_eq!(&buf[..4], b"H3CF");
        assert_eq!(buf.len(), 4 + 8 + 8 * (5 + 4 + 20));
        assert_eq!(Conv2DField::read_binary(&buf[..]).unwrap(), f);
        buf[0] = b'X';
        assert!(Conv2DField::read_binary(&buf[..]).is_err());
    }
}

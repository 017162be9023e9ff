use serde::Serialize;

use crate::error::{Error, Result};
use crate::C64;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PathMeta {
    pub seed: u64,
    pub replication: u64,
    pub burnin: usize,
    pub k_trunc: usize,
}

/// `T × n` realized values in orthonormal grid coordinates; row `t` is `X_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPath {
    n: usize,
    values: Vec<C64>,
    pub meta: PathMeta,
}

impl SampledPath {
    /// `values` is row-major with `n` columns.
    pub fn new(n: usize, values: Vec<C64>, meta: PathMeta) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("path needs at least one coordinate".into()));
        }
        if values.is_empty() {
            return Err(Error::InvalidArgument("empty path".into()));
        }
        if values.len() % n != 0 {
            return Err(Error::DimensionMismatch(format!(
                "{} values do not fill rows of width {n}",
                values.len()
            )));
        }
        if values.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Numerical("path has non-finite entries".into()));
        }
        Ok(Self { n, values, meta })
    }

    pub fn from_rows(rows: &[Vec<C64>], meta: PathMeta) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("rows of unequal width".into()));
        }
        Self::new(n, rows.concat(), meta)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of time points `T`.
    pub fn len(&self) -> usize {
        self.values.len() / self.n
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn row(&self, t: usize) -> &[C64] {
        &self.values[t * self.n..(t + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[C64]> {
        self.values.chunks_exact(self.n)
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// Column `i` as a time series.
    pub fn coordinate(&self, i: usize) -> Vec<C64> {
        self.rows().map(|r| r[i]).collect()
    }

    pub fn mean(&self) -> Vec<C64> {
        let mut m = vec![C64::new(0.0, 0.0); self.n];
        for r in self.rows() {
            for (a, b) in m.iter_mut().zip(r) {
                *a += b;
            }
        }
        let t = self.len() as f64;
        m.iter_mut().for_each(|a| *a /= t);
        m
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|z| z.im == 0.0)
    }
}

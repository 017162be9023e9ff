use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

pub type Matrix = DMatrix<C64>;

/// Bounded operator on a grid space, stored in the orthonormal weighted basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Rows", into = "Rows")]
pub struct LinearOperator(Matrix);

/// Row-major `[re, im]` pairs, the on-disk form of an operator.
#[derive(Serialize, Deserialize)]
struct Rows(Vec<Vec<[f64; 2]>>);

impl TryFrom<Rows> for LinearOperator {
    type Error = Error;

    fn try_from(rows: Rows) -> Result<Self> {
        let n = rows.0.len();
        if rows.0.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("operator rows of unequal length".into()));
        }
        Self::new(Matrix::from_fn(n, n, |i, j| {
            let [re, im] = rows.0[i][j];
            C64::new(re, im)
        }))
    }
}

impl From<LinearOperator> for Rows {
    fn from(op: LinearOperator) -> Self {
        let m = op.0;
        Rows(
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                .collect(),
        )
    }
}

impl LinearOperator {
    /// Wraps a square matrix; rejects non-square input and NaN/Inf entries.
    pub fn new(m: Matrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "operator must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.nrows() == 0 {
            return Err(Error::DimensionMismatch("operator of dimension 0".into()));
        }
        if m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Numerical("operator has non-finite entries".into()));
        }
        Ok(Self(m))
    }

    /// Wraps a matrix produced by internal arithmetic on valid operators.
    pub(crate) fn from_matrix(m: Matrix) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        Self(m)
    }

    pub fn identity(n: usize) -> Self {
        Self(Matrix::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(Matrix::zeros(n, n))
    }

    pub fn scalar(n: usize, c: C64) -> Self {
        Self(Matrix::from_diagonal_element(n, n, c))
    }

    pub fn diagonal(d: &[C64]) -> Self {
        Self(Matrix::from_diagonal(&nalgebra::DVector::from_column_slice(d)))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("rows of unequal length".into()));
        }
        Self::new(Matrix::from_fn(n, n, |i, j| C64::new(rows[i][j], 0.0)))
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        Self::new(Matrix::from_fn(n, n, f))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, c: C64) -> Self {
        Self(&self.0 * c)
    }

    pub fn scale_re(&self, c: f64) -> Self {
        self.scale(C64::new(c, 0.0))
    }

    pub fn singular_values(&self) -> Vec<f64> {
        self.0.clone().svd(false, false).singular_values.iter().copied().collect()
    }

    /// Operator norm, i.e. the Schatten-∞ norm.
    pub fn op_norm(&self) -> f64 {
        self.singular_values().into_iter().fold(0.0, f64::max)
    }

    pub fn min_singular_value(&self) -> f64 {
        self.singular_values().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Hilbert-Schmidt (Schatten-2) norm.
    pub fn hs_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn is_real(&self) -> bool {
        self.0.iter().all(|z| z.im == 0.0)
    }

    /// `‖A − A^H‖_∞ ≤ tol · max(‖A‖_∞, tiny)`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        let scale = self.op_norm().max(f64::MIN_POSITIVE);
        LinearOperator(&self.0 - self.0.adjoint()).op_norm() <= tol * scale
    }

    /// `(A + A^H) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0))
    }

    /// Solves `self · X = rhs` by LU; `None` when numerically singular.
    pub fn solve(&self, rhs: &LinearOperator) -> Option<LinearOperator> {
        let x = self.0.clone().lu().solve(&rhs.0)?;
        if x.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Some(Self(x))
        } else {
            None
        }
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self.0[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Largest entrywise distance to another operator of the same size.
    pub fn max_abs_diff(&self, other: &LinearOperator) -> f64 {
        (&self.0 - &other.0).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `‖self − other‖_∞` in operator norm.
    pub fn dist(&self, other: &LinearOperator) -> f64 {
        (self - other).op_norm()
    }
}

/// Schatten-`p` norm `(Σ σ_i^p)^{1/p}`; `p = ∞` gives the largest singular value.
pub fn schatten_norm(a: &LinearOperator, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "Schatten exponent must be >= 1, got {p}"
        )));
    }
    let sv = a.singular_values();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    if p.is_infinite() || smax == 0.0 {
        return Ok(smax);
    }
    // scaled to avoid overflow for large p
    let s: f64 = sv.iter().map(|s| (s / smax).powf(p)).sum();
    Ok(smax * s.powf(1.0 / p))
}

impl Add for &LinearOperator {
    type Output = LinearOperator;
    fn add(self, rhs: &LinearOperator) -> LinearOperator {
        LinearOperator(&self.0 + &rhs.0)
    }
}

impl Sub for &LinearOperator {
    type Output = LinearOperator;
    fn sub(self, rhs: &LinearOperator) -> LinearOperator {
        LinearOperator(&self.0 - &rhs.0)
    }
}

impl Mul for &LinearOperator {
    type Output = LinearOperator;
    fn mul(self, rhs: &LinearOperator) -> LinearOperator {
        LinearOperator(&self.0 * &rhs.0)
    }
}

impl Neg for &LinearOperator {
    type Output = LinearOperator;
    fn neg(self) -> LinearOperator {
        LinearOperator(-&self.0)
    }
}

impl AddAssign<&LinearOperator> for LinearOperator {
    fn add_assign(&mut self, rhs: &LinearOperator) {
        self.0 += &rhs.0;
    }
}

use super::grid::HilbertGrid;
use super::operator::{LinearOperator, Matrix};
use crate::error::{Error, Result};

/// Integral kernel of `A`: `(A f)(v_i) = Σ_j k(v_i, v_j) f(v_j) w_j`.
///
/// In the orthonormal basis this is `k_ij = A_ij / √(w_i w_j)`, so that
/// `Σ_ij |k_ij|² w_i w_j = ‖A‖₂²`.
pub fn kernel_of(a: &LinearOperator, grid: &HilbertGrid) -> Result<Matrix> {
    check_dim(a.dim(), grid)?;
    let sw: Vec<f64> = grid.weights().iter().map(|w| w.sqrt()).collect();
    Ok(Matrix::from_fn(a.dim(), a.dim(), |i, j| a.get(i, j) / (sw[i] * sw[j])))
}

/// Inverse of [`kernel_of`].
pub fn operator_of_kernel(k: &Matrix, grid: &HilbertGrid) -> Result<LinearOperator> {
    if k.nrows() != k.ncols() {
        return Err(Error::DimensionMismatch("kernel matrix must be square".into()));
    }
    check_dim(k.nrows(), grid)?;
    let sw: Vec<f64> = grid.weights().iter().map(|w| w.sqrt()).collect();
    LinearOperator::new(Matrix::from_fn(k.nrows(), k.ncols(), |i, j| k[(i, j)] * (sw[i] * sw[j])))
}

fn check_dim(n: usize, grid: &HilbertGrid) -> Result<()> {
    if n != grid.len() {
        return Err(Error::DimensionMismatch(format!(
            "operator of size {n} on a grid of {} points",
            grid.len()
        )));
    }
    Ok(())
}

/// `Σ_ij |k_ij|² w_i w_j`, the squared `L²(ξ⊗ξ)` norm of a kernel.
pub fn kernel_l2_norm_sq(k: &Matrix, grid: &HilbertGrid) -> f64 {
    let w = grid.weights();
    let mut s = 0.0;
    for i in 0..k.nrows() {
        for j in 0..k.ncols() {
            s += k[(i, j)].norm_sqr() * w[i] * w[j];
        }
    }
    s
}

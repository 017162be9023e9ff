use nalgebra::SymmetricEigen;

use super::normal::{is_normal, normal_decompose};
use super::operator::LinearOperator;
use crate::error::{Error, Result};
use crate::C64;

const NORMAL_TOL: f64 = 1e-12;

/// Matrix exponential by Padé scaling-and-squaring.
pub fn operator_exp(a: &LinearOperator) -> LinearOperator {
    LinearOperator::from_matrix(a.matrix().exp())
}

/// `exp(log_base · D)`, i.e. `b^D` for `log_base = ln b`.
///
/// Normal `D` goes through its unitary diagonalization; anything else
/// through the matrix exponential.
pub fn operator_power(d: &LinearOperator, log_base: C64) -> LinearOperator {
    if is_normal(d, NORMAL_TOL) {
        if let Ok(dec) = normal_decompose(d, NORMAL_TOL) {
            return dec.map(|x| (x * log_base).exp());
        }
    }
    operator_exp(&d.scale(log_base))
}

fn principal_log_one_minus(z: C64) -> Result<C64> {
    if z.im == 0.0 && z.re >= 1.0 {
        return Err(Error::Domain(format!(
            "z = {z} lies on the branch cut [1, inf) of ln(1 - z)"
        )));
    }
    Ok((C64::new(1.0, 0.0) - z).ln())
}

/// `(1 − z)^D = exp(D ln(1 − z))` with the principal logarithm.
pub fn operator_power_one_minus_z(d: &LinearOperator, z: C64) -> Result<LinearOperator> {
    Ok(operator_power(d, principal_log_one_minus(z)?))
}

/// Same as [`operator_power_one_minus_z`] but always through the matrix
/// exponential, whatever the structure of `D`.
pub fn operator_power_one_minus_z_expm(d: &LinearOperator, z: C64) -> Result<LinearOperator> {
    Ok(operator_exp(&d.scale(principal_log_one_minus(z)?)))
}

/// Hermitian PSD square root; eigenvalues in `[−tol, tol]` are clamped to zero.
pub fn sqrt_psd(a: &LinearOperator, tol: f64) -> Result<LinearOperator> {
    let scale = a.op_norm();
    let skew = (a - &a.adjoint()).op_norm();
    if skew > tol.max(1e-12 * scale) {
        return Err(Error::InvalidArgument(format!(
            "operator is not Hermitian (‖A − A^H‖ = {skew:.3e})"
        )));
    }
    let eig = SymmetricEigen::new(a.hermitian_part().into_matrix());
    let min_eig = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if min_eig < -tol {
        return Err(Error::NotPsd { min_eig });
    }
    let v = &eig.eigenvectors;
    let mut scaled = v.clone();
    for (j, lam) in eig.eigenvalues.iter().enumerate() {
        // eigenvalues at rounding level are zeroed so that exact projectors survive
        let s = if *lam <= tol { 0.0 } else { lam.sqrt() };
        let s = C64::new(s, 0.0);
        for i in 0..scaled.nrows() {
            scaled[(i, j)] *= s;
        }
    }
    let b = LinearOperator::from_matrix(&scaled * v.adjoint());
    Ok(b.hermitian_part())
}

/// [`sqrt_psd`] with the clamping threshold `1e−10 · ‖A‖_∞`.
pub fn sqrt_psd_default(a: &LinearOperator) -> Result<LinearOperator> {
    sqrt_psd(a, 1e-10 * a.op_norm())
}

/// Smallest eigenvalue of the Hermitian part.
pub fn min_eigenvalue(a: &LinearOperator) -> f64 {
    SymmetricEigen::new(a.hermitian_part().into_matrix())
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

use rustfft::FftPlanner;

use super::coeffs::{CoefficientKind, CoefficientSequence};
use super::poly::{check_invertible_on_circle_with, eval_poly_ar, OperatorPolynomial};
use crate::error::{Error, Result};
use crate::hilbert::{LinearOperator, Matrix};
use crate::parallel::Execution;
use crate::C64;

/// Laurent coefficients `P_{−K}..P_K` of `z ↦ φ(z)^{−1}` on the unit circle.
#[derive(Debug, Clone)]
pub struct LaurentInverse {
    pub coeffs: CoefficientSequence,
    /// `Σ_{K < |k| ≤ M/2} ‖P_k‖₂` from the discrete inversion: estimates the
    /// mass outside the returned window, which also bounds aliasing.
    pub tail_mass: f64,
    pub fft_size: usize,
}

pub fn ar_inverse_laurent(phi: &OperatorPolynomial, k_max: usize, fft_size: usize) -> Result<LaurentInverse> {
    ar_inverse_laurent_with(phi, k_max, fft_size, Execution::default())
}

/// Discrete Fourier inversion of `λ ↦ φ(e^{−iλ})^{−1}` on `fft_size` points.
pub fn ar_inverse_laurent_with(
    phi: &OperatorPolynomial,
    k_max: usize,
    fft_size: usize,
    exec: Execution,
) -> Result<LaurentInverse> {
    if !fft_size.is_power_of_two() || fft_size < 4 * k_max.max(1) {
        return Err(Error::InvalidArgument(format!(
            "fft_size must be a power of two >= 4K = {}, got {fft_size}",
            4 * k_max.max(1)
        )));
    }
    let check = check_invertible_on_circle_with(phi, fft_size, exec)?;
    if !check.invertible {
        return Err(Error::Singular {
            lambda: check.argmin_lambda,
            min_sv: check.min_singular_value,
        });
    }
    let n = phi.dim();
    let m = fft_size;
    let id = LinearOperator::identity(n);
    let samples: Vec<Matrix> = exec.try_map(m, |j| {
        let lambda = std::f64::consts::TAU * j as f64 / m as f64;
        let ph = eval_poly_ar(phi, C64::from_polar(1.0, -lambda));
        ph.solve(&id)
            .map(LinearOperator::into_matrix)
            .ok_or(Error::Singular {
                lambda,
                min_sv: ph.min_singular_value(),
            })
    })?;

    // P_k = (1/M) Σ_j Φ^{−1}(λ_j) e^{iλ_j k}: inverse DFT of each entry
    let fft = FftPlanner::<f64>::new().plan_fft_inverse(m);
    let mut full = vec![Matrix::zeros(n, n); m];
    let mut buf = vec![C64::new(0.0, 0.0); m];
    for r in 0..n {
        for c in 0..n {
            for (j, s) in samples.iter().enumerate() {
                buf[j] = s[(r, c)];
            }
            fft.process(&mut buf);
            for (k, v) in buf.iter().enumerate() {
                full[k][(r, c)] = v / m as f64;
            }
        }
    }
    let at = |k: i64| -> &Matrix { &full[k.rem_euclid(m as i64) as usize] };
    let kk = k_max as i64;
    let ops: Vec<LinearOperator> = (-kk..=kk)
        .map(|k| LinearOperator::from_matrix(at(k).clone()))
        .collect();
    let half = (m / 2) as i64;
    let tail_mass: f64 = (kk + 1..=half)
        .map(|k| at(k).norm() + if k < half { at(-k).norm() } else { 0.0 })
        .sum();
    Ok(LaurentInverse {
        coeffs: CoefficientSequence::new(-kk, ops, CoefficientKind::ArLaurent),
        tail_mass,
        fft_size,
    })
}

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{kernel_of, HilbertGrid, LinearOperator, Matrix};
use crate::parallel::Execution;
use crate::transfer::{arma_transfer, frac_transfer};
use crate::C64;

use super::model::{ArmaModel, FiarmaModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// Density with respect to `dλ` on `(−π, π]`; white noise is `Σ/(2π)`.
    Lebesgue,
}

/// Operator-valued spectral density sampled on a frequency grid.
#[derive(Debug, Clone)]
pub struct SpectralDensityGrid {
    pub freqs: Vec<f64>,
    pub values: Vec<LinearOperator>,
    pub normalization: Normalization,
}

impl SpectralDensityGrid {
    pub fn traces(&self) -> Vec<f64> {
        self.values.iter().map(|g| g.trace().re).collect()
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.values.first().map_or(0, LinearOperator::dim)
    }
}

/// `m` equispaced frequencies `−π + (j + ½) 2π/m`; for even `m` the origin
/// is never hit.
pub fn offset_grid(m: usize) -> Vec<f64> {
    (0..m).map(|j| -PI + (j as f64 + 0.5) * TAU / m as f64).collect()
}

/// Positive Fourier frequencies `2πj/T`, `j = 1..⌊T/2⌋`.
pub fn fourier_frequencies(t_len: usize) -> Vec<f64> {
    (1..=t_len / 2).map(|j| TAU * j as f64 / t_len as f64).collect()
}

fn noise_density(m: &ArmaModel, lambda: f64) -> Result<LinearOperator> {
    let t = arma_transfer(m.phi(), m.theta(), lambda)?;
    let g = &(&t * m.sigma()) * &t.adjoint();
    Ok(g.hermitian_part().scale_re(1.0 / TAU))
}

pub fn arma_spectral_density(m: &ArmaModel, freqs: &[f64]) -> Result<SpectralDensityGrid> {
    arma_spectral_density_with(m, freqs, Execution::default())
}

/// `g(λ) = T(λ) Σ T(λ)^H / (2π)` with `T = φ^{−1} θ` at `e^{−iλ}`.
pub fn arma_spectral_density_with(m: &ArmaModel, freqs: &[f64], exec: Execution) -> Result<SpectralDensityGrid> {
    let values = exec.try_map(freqs.len(), |j| noise_density(m, freqs[j]))?;
    Ok(SpectralDensityGrid {
        freqs: freqs.to_vec(),
        values,
        normalization: Normalization::Lebesgue,
    })
}

pub fn fiarma_spectral_density(m: &FiarmaModel, freqs: &[f64]) -> Result<SpectralDensityGrid> {
    fiarma_spectral_density_with(m, freqs, Execution::default())
}

/// Filtering rule `g_Y = F_D g_X F_D^H`; the zero operator at `λ = 0`.
pub fn fiarma_spectral_density_with(m: &FiarmaModel, freqs: &[f64], exec: Execution) -> Result<SpectralDensityGrid> {
    let values = exec.try_map(freqs.len(), |j| {
        let lambda = freqs[j];
        let gx = noise_density(&m.base, lambda)?;
        let f = frac_transfer(&m.frac, lambda);
        Ok::<_, Error>((&(&f * &gx) * &f.adjoint()).hermitian_part())
    })?;
    Ok(SpectralDensityGrid {
        freqs: freqs.to_vec(),
        values,
        normalization: Normalization::Lebesgue,
    })
}

/// Quadrature weights: the periodic rectangle rule when the grid is
/// equispaced over a full period, the trapezoidal rule otherwise.
fn quadrature_weights(freqs: &[f64]) -> Vec<f64> {
    let m = freqs.len();
    if m == 0 {
        return Vec::new();
    }
    if m == 1 {
        return vec![TAU];
    }
    let step = freqs[1] - freqs[0];
    let equispaced = freqs
        .windows(2)
        .all(|w| ((w[1] - w[0]) - step).abs() <= 1e-9 * step.abs());
    if equispaced && ((m as f64 * step).abs() - TAU).abs() <= 1e-9 * TAU {
        return vec![step.abs(); m];
    }
    let mut w = vec![0.0; m];
    for j in 0..m - 1 {
        let h = (freqs[j + 1] - freqs[j]).abs() / 2.0;
        w[j] += h;
        w[j + 1] += h;
    }
    w
}

/// `Γ(h) = ∫ e^{iλh} g(λ) dλ` by quadrature on the stored frequencies;
/// negative lags are returned as `Γ(|h|)^H`.
pub fn autocov_from_density(g: &SpectralDensityGrid, h: i64) -> LinearOperator {
    if h < 0 {
        return autocov_from_density(g, -h).adjoint();
    }
    let w = quadrature_weights(&g.freqs);
    let mut acc = LinearOperator::zeros(g.dim().max(1));
    for ((lambda, gl), wl) in g.freqs.iter().zip(&g.values).zip(&w) {
        acc += &gl.scale(C64::from_polar(*wl, lambda * h as f64));
    }
    if h == 0 {
        acc.hermitian_part()
    } else {
        acc
    }
}

/// Autocovariances at lags `−H..=H`.
#[derive(Debug, Clone)]
pub struct AutocovarianceSequence {
    pub max_lag: usize,
    /// `ops[H + h]` holds `Γ(h)`.
    pub ops: Vec<LinearOperator>,
}

impl AutocovarianceSequence {
    pub fn at(&self, h: i64) -> Option<&LinearOperator> {
        let idx = h + self.max_lag as i64;
        usize::try_from(idx).ok().and_then(|i| self.ops.get(i))
    }
}

pub fn autocov_sequence(g: &SpectralDensityGrid, max_lag: usize) -> AutocovarianceSequence {
    let pos: Vec<LinearOperator> = (0..=max_lag).map(|h| autocov_from_density(g, h as i64)).collect();
    let mut ops: Vec<LinearOperator> = pos[1..].iter().rev().map(LinearOperator::adjoint).collect();
    ops.extend(pos);
    AutocovarianceSequence { max_lag, ops }
}

/// Joint kernel `k_g(v_i, v_j; λ_l)` of the density, one matrix per frequency.
pub fn cross_spectral_kernel(g: &SpectralDensityGrid, grid: &HilbertGrid) -> Result<Vec<Matrix>> {
    g.values.iter().map(|op| kernel_of(op, grid)).collect()
}

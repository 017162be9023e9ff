use std::f64::consts::{PI, TAU};

use serde::Serialize;

use super::quadrature::gauss_legendre;
use super::NORMAL_TOL;
use crate::error::{Error, Result};
use crate::parallel::Execution;
use crate::spectral::ArmaModel;
use crate::transfer::{arma_transfer, FracIntegrationSpec};

/// Shell ratios at or above this count as non-decaying.
const DIVERGENCE_RATIO: f64 = 1.0 - 1e-3;
const DIVERGENCE_RUN: usize = 3;

#[derive(Debug, Clone, Serialize)]
pub struct ExistenceIntegral {
    pub eta: f64,
    pub n_freq: usize,
    pub n_refine: usize,
    /// Contribution of `η2^{−l−1} < |λ| ≤ η2^{−l}` for each level `l`.
    pub shells: Vec<f64>,
    pub partial_sum: f64,
    /// Geometric extrapolation of the unresolved part `|λ| ≤ η2^{−n_refine}`.
    pub tail_estimate: f64,
    /// `partial_sum + tail_estimate`, or `+∞` when divergent.
    pub value: f64,
    pub divergent: bool,
}

pub fn existence_integral(
    m: &ArmaModel,
    d: &FracIntegrationSpec,
    eta: f64,
    n_freq: usize,
    n_refine: usize,
) -> Result<ExistenceIntegral> {
    existence_integral_with(m, d, eta, n_freq, n_refine, Execution::default())
}

/// `∫_{−η}^{η} Σ_i |λ|^{−2 Re d_i} Σ_j |h_ij(λ)|² dλ/(2π)` with
/// `h(λ) = U φ(e^{−iλ})^{−1} θ(e^{−iλ}) Σ^{1/2} U^H`, integrated over dyadic
/// shells toward `λ = 0` with Gauss–Legendre in `ln |λ|` on each shell.
pub fn existence_integral_with(
    m: &ArmaModel,
    d: &FracIntegrationSpec,
    eta: f64,
    n_freq: usize,
    n_refine: usize,
    exec: Execution,
) -> Result<ExistenceIntegral> {
    if !(eta > 0.0 && eta < PI) {
        return Err(Error::InvalidArgument(format!("eta must lie in (0, pi), got {eta}")));
    }
    if n_freq == 0 || n_refine < DIVERGENCE_RUN + 1 {
        return Err(Error::InvalidArgument(format!(
            "need n_freq >= 1 and n_refine >= {}, got {n_freq} and {n_refine}",
            DIVERGENCE_RUN + 1
        )));
    }
    if d.dim() != m.dim() {
        return Err(Error::DimensionMismatch(format!("D on {} but model on {}", d.dim(), m.dim())));
    }
    let dec = d.decomposition_or_compute(NORMAL_TOL)?;
    let re_d: Vec<f64> = dec.d.iter().map(|z| z.re).collect();
    let (nodes, weights) = gauss_legendre(n_freq);

    // row masses of U T(λ) Σ^{1/2}; the trailing U^H leaves them unchanged
    let integrand = |lambda: f64| -> Result<f64> {
        let t = arma_transfer(m.phi(), m.theta(), lambda)?;
        let h = &(&dec.u * &t) * m.sigma_sqrt();
        let mat = h.matrix();
        let l = lambda.abs().ln();
        Ok(re_d
            .iter()
            .enumerate()
            .map(|(i, rd)| (-2.0 * rd * l).exp() * mat.row(i).norm_squared())
            .sum::<f64>()
            / TAU)
    };
    let shells = exec.try_map(n_refine, |l| {
        let hi = eta * 0.5f64.powi(l as i32);
        let (s0, s1) = ((hi * 0.5).ln(), hi.ln());
        let half = 0.5 * (s1 - s0);
        let mid = 0.5 * (s1 + s0);
        let mut acc = 0.0;
        for (x, w) in nodes.iter().zip(&weights) {
            let lambda = (mid + half * x).exp();
            acc += w * half * lambda * (integrand(lambda)? + integrand(-lambda)?);
        }
        Ok::<_, Error>(acc)
    })?;

    let partial_sum: f64 = shells.iter().sum();
    let ratios: Vec<f64> = shells.windows(2).map(|w| w[1] / w[0]).collect();
    let last = &ratios[ratios.len() - DIVERGENCE_RUN..];
    let divergent = last.iter().all(|r| *r >= DIVERGENCE_RATIO);
    let (tail_estimate, value) = if divergent {
        (f64::INFINITY, f64::INFINITY)
    } else {
        let r = *last.last().expect("non-empty");
        let tail = if r.is_finite() && r > 0.0 {
            shells[n_refine - 1] * r / (1.0 - r)
        } else {
            0.0
        };
        (tail, partial_sum + tail)
    };
    Ok(ExistenceIntegral {
        eta,
        n_freq,
        n_refine,
        shells,
        partial_sum,
        tail_estimate,
        value,
        divergent,
    })
}

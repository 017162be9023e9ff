use serde::Serialize;

use super::config::SimConfig;
use super::convolve::Convolution;
use super::noise::{sigma_sqrt, NoiseSource};
use super::path::{PathMeta, SampledPath};
use crate::error::{Error, Result};
use crate::existence::{check_duker_conditions, DukerConditionReport};
use crate::hilbert::{operator_exp, HilbertGrid, LinearOperator};
use crate::transfer::duker_decomposition;
use crate::C64;

fn gate(n: &LinearOperator, sigma: &LinearOperator, grid: &HilbertGrid, force: bool) -> Result<Option<DukerConditionReport>> {
    match check_duker_conditions(n, sigma, grid, None) {
        Ok(report) => {
            if !force {
                report.require_passes()?;
            }
            Ok(Some(report))
        }
        Err(_) if force => Ok(None),
        Err(Error::InvalidArgument(msg)) => Err(Error::Refused {
            condition: "normal N".into(),
            reason: msg,
        }),
        Err(e) => Err(e),
    }
}

/// `(k+1)^{−N} = exp(−ln(k+1) N)` for `k = 0..=K`.
fn power_weights(n: &LinearOperator, k_max: usize) -> Vec<LinearOperator> {
    (0..=k_max)
        .map(|k| operator_exp(&n.scale_re(-((k + 1) as f64).ln())))
        .collect()
}

fn noise_window(n: &LinearOperator, sigma: &LinearOperator, cfg: &SimConfig) -> Result<(NoiseSource, Vec<C64>)> {
    let s = sigma_sqrt(sigma)?;
    let kind = cfg.noise_for(n.is_real() && sigma.is_real());
    let src = NoiseSource::new(cfg.seed, cfg.replication, kind, n.dim());
    let eps = src.colored(&s, -(cfg.k_trunc as i64), cfg.k_trunc + cfg.t_len);
    Ok((src, eps))
}

fn check_dims(n: &LinearOperator, sigma: &LinearOperator, cfg: &SimConfig) -> Result<()> {
    cfg.validate()?;
    if n.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!("N on {} but Sigma on {}", n.dim(), sigma.dim())));
    }
    Ok(())
}

/// `Y_t = Σ_{k ≤ K} (k+1)^{−N} ε_{t−k}` on keyed noise `ε`.
pub fn simulate_duker(
    n: &LinearOperator,
    sigma: &LinearOperator,
    grid: &HilbertGrid,
    cfg: &SimConfig,
    force: bool,
) -> Result<SampledPath> {
    check_dims(n, sigma, cfg)?;
    gate(n, sigma, grid, force)?;
    let k = cfg.k_trunc;
    let (_, eps) = noise_window(n, sigma, cfg)?;
    let conv = Convolution::new(&power_weights(n, k), k + cfg.t_len);
    let y = conv.apply(&eps);
    SampledPath::new(
        n.dim(),
        y[k * n.dim()..].to_vec(),
        PathMeta {
            seed: cfg.seed,
            replication: cfg.replication,
            burnin: k,
            k_trunc: k,
        },
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct LongMemoryReport {
    /// `max_t ‖A_t − B_t‖₂` over `t ∈ [0, T)`.
    pub residual: f64,
    /// `max_t ‖A_t‖₂`, for scale.
    pub path_scale: f64,
    pub window: (usize, usize),
    pub k_trunc: usize,
    pub c_norm: f64,
    pub rho: f64,
    /// `(k, Σ_{j ≤ k} ‖Δ_j‖_∞)` at `k = 1, 2, 4, ..` and the final index.
    pub delta_partial_sums: Vec<(usize, f64)>,
    /// `S_K − S_{K/2}` at the certificate length `K`.
    pub cauchy_block: f64,
    /// `(S_K − S_{K/2}) / S_K`.
    pub cauchy_block_relative: f64,
    /// Power-law extrapolation of `Σ_{j > K} ‖Δ_j‖_∞`, relative to `S_K`.
    pub extrapolated_remainder_relative: f64,
}

/// Pathwise check of `(1 − z)^{N − Id} ε = C Y + Z` on one shared noise
/// window: `A = Σ b_k ε_{t−k}` against `B = C Σ (k+1)^{−N} ε_{t−k} + Σ Δ_k ε_{t−k}`,
/// all truncated at `K_trunc`. The `Δ` partial sums are reported up to
/// `certificate_k`.
pub fn verify_longmemory_decomposition(
    n: &LinearOperator,
    sigma: &LinearOperator,
    grid: &HilbertGrid,
    cfg: &SimConfig,
    certificate_k: usize,
) -> Result<LongMemoryReport> {
    check_dims(n, sigma, cfg)?;
    gate(n, sigma, grid, false)?;
    let k = cfg.k_trunc;
    let cert_k = certificate_k.max(k).max(2);
    let dec = duker_decomposition(n, cert_k)?;
    let dim = n.dim();
    let (_, eps) = noise_window(n, sigma, cfg)?;
    let len = k + cfg.t_len;

    let path_a = Convolution::new(&dec.binomial.ops[..=k], len).apply(&eps);
    let weights: Vec<LinearOperator> = (0..=k).map(|j| dec.power_weight(j)).collect();
    let y = Convolution::new(&weights, len).apply(&eps);
    let z = Convolution::new(&dec.deltas.ops[..=k], len).apply(&eps);
    let mut residual: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for t in k..len {
        let row = |v: &[C64]| v[t * dim..(t + 1) * dim].to_vec();
        let cy = dec.c.apply(&row(&y));
        let a = row(&path_a);
        let zr = row(&z);
        let diff: f64 = (0..dim).map(|i| (a[i] - cy[i] - zr[i]).norm_sqr()).sum::<f64>().sqrt();
        let norm: f64 = a.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        residual = residual.max(diff);
        scale = scale.max(norm);
    }

    let norms = dec.delta_norms();
    let mut sums = Vec::with_capacity(norms.len());
    let mut acc = 0.0;
    for x in &norms {
        acc += x;
        sums.push(acc);
    }
    let mut delta_partial_sums = Vec::new();
    let mut j = 1;
    while j < cert_k {
        delta_partial_sums.push((j, sums[j]));
        j *= 2;
    }
    delta_partial_sums.push((cert_k, sums[cert_k]));
    let total = sums[cert_k];
    let cauchy_block = total - sums[cert_k / 2];
    // ‖Δ_k‖ ≈ c k^{−1−r}: Σ_{j>K} ≈ ‖Δ_K‖ K / r with r from the last octave
    let r = ((norms[cert_k / 2] / norms[cert_k]).ln() / 2f64.ln() - 1.0).max(1e-3);
    let remainder = norms[cert_k] * cert_k as f64 / r;
    Ok(LongMemoryReport {
        residual,
        path_scale: scale,
        window: (0, cfg.t_len),
        k_trunc: k,
        c_norm: dec.c.op_norm(),
        rho: dec.rho,
        delta_partial_sums,
        cauchy_block,
        cauchy_block_relative: if total > 0.0 { cauchy_block / total } else { 0.0 },
        extrapolated_remainder_relative: if total > 0.0 { remainder / total } else { 0.0 },
    })
}

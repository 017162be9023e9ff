use serde::Serialize;

use super::arma::{arma_rows, default_arma_burnin};
use super::config::SimConfig;
use super::convolve::Convolution;
use super::noise::NoiseSource;
use super::path::{PathMeta, SampledPath};
use crate::error::{Error, Result};
use crate::existence::{check_conditions, ExistenceReport, DEFAULT_SUPPORT_TOL};
use crate::hilbert::{min_eigenvalue, HilbertGrid};
use crate::spectral::FiarmaModel;
use crate::transfer::frac_ma_coeffs;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Truncation {
    /// `‖C_K‖_∞`.
    pub last_coeff_norm: f64,
    /// `‖C_K‖ · K / max(1, 1 − 2 max Re d)`.
    pub tail_estimate: f64,
}

/// Existence gate for FIARMA synthesis: `Ok(report)` when the verdict holds,
/// a refusal naming the failed condition otherwise. Non-normal `D` is refused
/// as well since no criterion applies to it.
pub fn fiarma_admissibility(m: &FiarmaModel, grid: &HilbertGrid) -> Result<ExistenceReport> {
    let report = check_conditions(&m.base, &m.frac, grid, DEFAULT_SUPPORT_TOL).map_err(|e| match e {
        Error::InvalidArgument(msg) if msg.contains("normal") => Error::Refused {
            condition: "normal D".into(),
            reason: msg,
        },
        e => e,
    })?;
    report.require_holds()?;
    Ok(report)
}

/// Largest real part in the spectrum of `D`, bounded by the top eigenvalue
/// of its Hermitian part when no decomposition is at hand.
fn max_re_d(m: &FiarmaModel) -> f64 {
    match m.frac.decomposition() {
        Some(dec) => dec.max_re(),
        None => -min_eigenvalue(&m.frac.operator().hermitian_part().scale_re(-1.0)),
    }
}

/// Prepared FIARMA synthesizer: coefficients and their transforms are
/// computed once and reused across replications.
pub struct FiarmaSimulator {
    model: FiarmaModel,
    cfg: SimConfig,
    arma_burnin: usize,
    conv: Convolution,
    pub truncation: Truncation,
    pub existence: Option<ExistenceReport>,
}

impl FiarmaSimulator {
    /// `force` skips the existence gate; the report is still attached when
    /// it can be computed.
    pub fn new(m: &FiarmaModel, grid: &HilbertGrid, cfg: &SimConfig, force: bool) -> Result<Self> {
        cfg.validate()?;
        if cfg.k_trunc == 0 {
            return Err(Error::InvalidArgument("K_trunc must be at least 1".into()));
        }
        let existence = if force {
            check_conditions(&m.base, &m.frac, grid, DEFAULT_SUPPORT_TOL).ok()
        } else {
            Some(fiarma_admissibility(m, grid)?)
        };
        let k = cfg.k_trunc;
        let coeffs = frac_ma_coeffs(&m.frac, k);
        let last = coeffs.ops[k].op_norm();
        let truncation = Truncation {
            last_coeff_norm: last,
            tail_estimate: last * k as f64 / (1.0 - 2.0 * max_re_d(m)).max(1.0),
        };
        let arma_burnin = cfg.burnin.unwrap_or_else(|| default_arma_burnin(&m.base) + k);
        let conv = Convolution::new(&coeffs.ops, arma_burnin.max(k) + cfg.t_len);
        Ok(Self {
            model: m.clone(),
            cfg: cfg.clone(),
            arma_burnin,
            conv,
            truncation,
            existence,
        })
    }

    pub fn path(&self, replication: u64) -> Result<SampledPath> {
        let n = self.model.dim();
        let t_len = self.cfg.t_len;
        let b = self.arma_burnin;
        let k = self.cfg.k_trunc;
        let kind = self.cfg.noise_for(self.model.is_real());
        let src = NoiseSource::new(self.cfg.seed, replication, kind, n);
        // X on τ ∈ [−max(B, K), T), zero before −B
        let pad = k.saturating_sub(b);
        let mut x = vec![crate::C64::new(0.0, 0.0); pad * n];
        x.extend(arma_rows(&self.model.base, &src, b, t_len));
        let y = self.conv.apply(&x);
        let skip = (b + pad) * n;
        SampledPath::new(
            n,
            y[skip..].to_vec(),
            PathMeta {
                seed: self.cfg.seed,
                replication,
                burnin: b,
                k_trunc: k,
            },
        )
    }
}

/// `Y_t = Σ_{k ≤ K} C_k X_{t−k}` with `C_k` the coefficients of `(1 − z)^{−D}`
/// and `X` the ARMA path on the same keyed noise. With an explicit burn-in
/// `B`, `X_τ = 0` for `τ < −B`; the default is the ARMA burn-in plus `K`.
pub fn simulate_fiarma(m: &FiarmaModel, grid: &HilbertGrid, cfg: &SimConfig, force: bool) -> Result<SampledPath> {
    FiarmaSimulator::new(m, grid, cfg, force)?.path(cfg.replication)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::LinearOperator;
    use crate::simulation::simulate_arma;
    use crate::spectral::ArmaModel;
    use crate::transfer::{FracIntegrationSpec, OperatorPolynomial};
    use crate::C64;

    fn ar1(n: usize) -> ArmaModel {
        ArmaModel::new(
            OperatorPolynomial::scalar_lag1(n, 0.5),
            OperatorPolynomial::identity(n),
            LinearOperator::identity(n),
        )
        .unwrap()
    }

    #[test]
    fn zero_d_reproduces_arma() {
        let m = FiarmaModel::new(ar1(2), FracIntegrationSpec::scalar(2, 0.0)).unwrap();
        let cfg = SimConfig::new(200, 8).with_burnin(100).with_k_trunc(300);
        let y = simulate_fiarma(&m, &HilbertGrid::uniform(2).unwrap(), &cfg, false).unwrap();
        let x = simulate_arma(&m.base, &cfg).unwrap();
        assert_eq!(y.values(), x.values());
    }

    #[test]
    fn filter_composition_matches_direct_convolution() {
        let m = FiarmaModel::new(ar1(1), FracIntegrationSpec::scalar(1, 0.3)).unwrap();
        let k = 100;
        let b = 150;
        let cfg = SimConfig::new(80, 2).with_burnin(b).with_k_trunc(k);
        let y = simulate_fiarma(&m, &HilbertGrid::scalar(), &cfg, false).unwrap();
        // ARMA rows over the whole window on the same keyed noise, then the convolution by hand
        let src = NoiseSource::new(2, 0, crate::simulation::NoiseKind::RealGaussian, 1);
        let x = arma_rows(&m.base, &src, b, 80);
        let coeffs = frac_ma_coeffs(&m.frac, k);
        for t in 0..80 {
            let mut want = C64::new(0.0, 0.0);
            for kk in 0..=k {
                let tau = t + b;
                if kk <= tau {
                    want += coeffs.ops[kk].get(0, 0) * x[tau - kk];
                }
            }
            assert!((y.row(t)[0] - want).norm() < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn refusal_and_vacuous_case() {
        let grid = HilbertGrid::scalar();
        let cfg = SimConfig::new(32, 1).with_k_trunc(64);
        let white = ArmaModel::white_noise(LinearOperator::identity(1)).unwrap();
        let m = FiarmaModel::new(white, FracIntegrationSpec::scalar(1, 0.6)).unwrap();
        let err = simulate_fiarma(&m, &grid, &cfg, false).unwrap_err();
        assert!(err.is_refusal());
        assert!(err.to_string().contains("(ii)"));
        assert!(simulate_fiarma(&m, &grid, &cfg, true).is_ok());

        let diff = ArmaModel::new(
            OperatorPolynomial::identity(1),
            OperatorPolynomial::scalar_lag1(1, -1.0),
            LinearOperator::identity(1),
        )
        .unwrap();
        let m = FiarmaModel::new(diff, FracIntegrationSpec::scalar(1, 0.75)).unwrap();
        assert!(simulate_fiarma(&m, &grid, &cfg, false).is_ok());
    }

    #[test]
    fn non_normal_d_needs_force() {
        let d = LinearOperator::from_real_rows(&[&[0.2, 0.1], &[0.0, 0.2]]).unwrap();
        let m = FiarmaModel::new(
            ArmaModel::white_noise(LinearOperator::identity(2)).unwrap(),
            FracIntegrationSpec::new(d),
        )
        .unwrap();
        let cfg = SimConfig::new(16, 0).with_k_trunc(8);
        let grid = HilbertGrid::uniform(2).unwrap();
        let err = simulate_fiarma(&m, &grid, &cfg, false).unwrap_err();
        assert!(err.is_refusal(), "{err}");
        assert!(simulate_fiarma(&m, &grid, &cfg, true).is_ok());
    }

    #[test]
    fn truncation_diagnostics() {
        let white = ArmaModel::white_noise(LinearOperator::identity(1)).unwrap();
        let m = FiarmaModel::new(white, FracIntegrationSpec::scalar(1, 0.3)).unwrap();
        let sim = FiarmaSimulator::new(&m, &HilbertGrid::scalar(), &SimConfig::new(8, 0).with_k_trunc(1000), false).unwrap();
        let c_k = frac_ma_coeffs(&m.frac, 1000).ops[1000].get(0, 0).re;
        assert!((sim.truncation.last_coeff_norm - c_k).abs() < 1e-15);
        assert!((sim.truncation.tail_estimate - c_k * 1000.0).abs() < 1e-12);
    }
}

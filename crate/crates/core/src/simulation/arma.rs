use super::config::SimConfig;
use super::noise::NoiseSource;
use super::path::{PathMeta, SampledPath};
use crate::error::Result;
use crate::hilbert::{LinearOperator, Matrix};
use crate::spectral::ArmaModel;
use crate::C64;

const BURNIN_CAP: usize = 1_000_000;

/// `10 p + ⌈ln(1e−12) / ln r⌉` with `r` the spectral radius of the AR
/// companion operator, estimated as `‖A^{1024}‖^{1/1024}`.
pub fn default_arma_burnin(m: &ArmaModel) -> usize {
    let p = m.phi().degree();
    if p == 0 {
        return 0;
    }
    let r = companion_radius(m);
    let decay = if r <= 1e-12 {
        1
    } else if r >= 1.0 {
        BURNIN_CAP
    } else {
        (1e-12f64.ln() / r.ln()).ceil() as usize
    };
    (10 * p + decay).min(BURNIN_CAP)
}

fn companion_radius(m: &ArmaModel) -> f64 {
    let n = m.dim();
    let p = m.phi().degree();
    let size = n * p;
    let mut a = Matrix::zeros(size, size);
    for (k, c) in m.phi().coeffs().iter().enumerate() {
        a.view_mut((0, k * n), (n, n)).copy_from(c.matrix());
    }
    for i in n..size {
        a[(i, i - n)] = C64::new(1.0, 0.0);
    }
    // ‖A^{2^s}‖^{1/2^s}, renormalized at each squaring
    let mut log_norm = 0.0;
    let mut power = a;
    for s in 0..10 {
        let norm = power.norm();
        if norm == 0.0 {
            return 0.0;
        }
        power /= C64::new(norm, 0.0);
        log_norm += norm.ln() / (1u64 << s) as f64;
        power = &power * &power;
    }
    let tail = power.norm();
    if tail == 0.0 {
        return 0.0;
    }
    (log_norm + tail.ln() / 1024.0).exp()
}

/// Rows `X_τ` for `τ = −burnin .. T` from zero history; `X_τ = 0` for `τ < −burnin`.
pub(crate) fn arma_rows(m: &ArmaModel, src: &NoiseSource, burnin: usize, t_len: usize) -> Vec<C64> {
    let n = m.dim();
    let q = m.theta().degree();
    let start = -(burnin as i64);
    let total = burnin + t_len;
    let z = src.colored(m.sigma_sqrt(), start - q as i64, total + q);
    let zero = C64::new(0.0, 0.0);
    let mut x = vec![zero; total * n];
    let apply_add = |c: &LinearOperator, v: &[C64], out: &mut [C64]| {
        let mat = c.matrix();
        for (i, o) in out.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                *o += mat[(i, j)] * vj;
            }
        }
    };
    let mut row = vec![zero; n];
    for t in 0..total {
        let zt = t + q;
        row.copy_from_slice(&z[zt * n..(zt + 1) * n]);
        for (k, b) in m.theta().coeffs().iter().enumerate() {
            let lag = zt - (k + 1);
            apply_add(b, &z[lag * n..(lag + 1) * n], &mut row);
        }
        for (k, a) in m.phi().coeffs().iter().enumerate() {
            if let Some(lag) = t.checked_sub(k + 1) {
                let prev: Vec<C64> = x[lag * n..(lag + 1) * n].to_vec();
                apply_add(a, &prev, &mut row);
            }
        }
        x[t * n..(t + 1) * n].copy_from_slice(&row);
    }
    x
}

/// `X_t = Σ A_k X_{t−k} + Z_t + Σ B_k Z_{t−k}`, `t = 0..T`, after discarding
/// the burn-in rows.
pub fn simulate_arma(m: &ArmaModel, cfg: &SimConfig) -> Result<SampledPath> {
    cfg.validate()?;
    let n = m.dim();
    let burnin = cfg.burnin.unwrap_or_else(|| default_arma_burnin(m));
    let src = NoiseSource::new(cfg.seed, cfg.replication, cfg.noise_for(m.is_real()), n);
    let rows = arma_rows(m, &src, burnin, cfg.t_len);
    SampledPath::new(
        n,
        rows[burnin * n..].to_vec(),
        PathMeta {
            seed: cfg.seed,
            replication: cfg.replication,
            burnin,
            ..PathMeta::default()
        },
    )
}

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::config::{NoiseKind, SimConfig};
use super::path::{PathMeta, SampledPath};
use crate::error::Result;
use crate::hilbert::{sqrt_psd, LinearOperator};
use crate::C64;

/// Independent standard Gaussian vectors `ξ_τ`, one ChaCha stream per time
/// index so any window of any replication can be drawn on its own.
#[derive(Debug, Clone)]
pub(crate) struct NoiseSource {
    key: u64,
    kind: NoiseKind,
    n: usize,
}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl NoiseSource {
    pub fn new(seed: u64, replication: u64, kind: NoiseKind, n: usize) -> Self {
        let key = mix(mix(seed).wrapping_add(replication.wrapping_mul(0x9e37_79b9_7f4a_7c15)));
        Self { key, kind, n }
    }

    pub fn draw(&self, tau: i64, out: &mut [C64]) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.key);
        rng.set_stream(tau as u64);
        match self.kind {
            NoiseKind::RealGaussian => {
                for z in out.iter_mut() {
                    *z = C64::new(StandardNormal.sample(&mut rng), 0.0);
                }
            }
            NoiseKind::ComplexGaussian => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                for z in out.iter_mut() {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    *z = C64::new(s * re, s * im);
                }
            }
        }
    }

    /// Rows `S ξ_τ` for `τ = start .. start + len`, row-major.
    pub fn colored(&self, sqrt: &LinearOperator, start: i64, len: usize) -> Vec<C64> {
        let n = self.n;
        let mut xi = vec![C64::new(0.0, 0.0); n];
        let mut out = Vec::with_capacity(len * n);
        let m = sqrt.matrix();
        for t in 0..len {
            self.draw(start + t as i64, &mut xi);
            for i in 0..n {
                out.push((0..n).map(|j| m[(i, j)] * xi[j]).sum());
            }
        }
        out
    }
}

pub(crate) fn sigma_sqrt(sigma: &LinearOperator) -> Result<LinearOperator> {
    sqrt_psd(sigma, 1e-10 * sigma.op_norm())
}

/// Rows `ε_t = Σ^{1/2} ξ_t`, `t = 0..T`.
pub fn gaussian_white_noise(sigma: &LinearOperator, cfg: &SimConfig) -> Result<SampledPath> {
    cfg.validate()?;
    let s = sigma_sqrt(sigma)?;
    let n = sigma.dim();
    let src = NoiseSource::new(cfg.seed, cfg.replication, cfg.noise_for(sigma.is_real()), n);
    SampledPath::new(
        n,
        src.colored(&s, 0, cfg.t_len),
        PathMeta {
            seed: cfg.seed,
            replication: cfg.replication,
            ..PathMeta::default()
        },
    )
}

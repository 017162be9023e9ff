use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_K_TRUNC: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseKind {
    ComplexGaussian,
    RealGaussian,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    #[serde(rename = "T")]
    pub t_len: usize,
    /// `None` picks a model-dependent default.
    #[serde(default)]
    pub burnin: Option<usize>,
    #[serde(default = "default_k_trunc")]
    pub k_trunc: usize,
    #[serde(default)]
    pub seed: u64,
    /// `None` picks real noise when every model operator is real.
    #[serde(default)]
    pub noise_kind: Option<NoiseKind>,
    #[serde(default)]
    pub replication: u64,
}

fn default_k_trunc() -> usize {
    DEFAULT_K_TRUNC
}

impl SimConfig {
    pub fn new(t_len: usize, seed: u64) -> Self {
        Self {
            t_len,
            burnin: None,
            k_trunc: DEFAULT_K_TRUNC,
            seed,
            noise_kind: None,
            replication: 0,
        }
    }

    pub fn with_burnin(mut self, burnin: usize) -> Self {
        self.burnin = Some(burnin);
        self
    }

    pub fn with_k_trunc(mut self, k: usize) -> Self {
        self.k_trunc = k;
        self
    }

    pub fn with_noise(mut self, kind: NoiseKind) -> Self {
        self.noise_kind = Some(kind);
        self
    }

    pub fn with_replication(mut self, r: u64) -> Self {
        self.replication = r;
        self
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.t_len == 0 {
            return Err(Error::InvalidArgument("T must be at least 1".into()));
        }
        Ok(())
    }

    pub(crate) fn noise_for(&self, real_model: bool) -> NoiseKind {
        self.noise_kind.unwrap_or(if real_model {
            NoiseKind::RealGaussian
        } else {
            NoiseKind::ComplexGaussian
        })
    }
}

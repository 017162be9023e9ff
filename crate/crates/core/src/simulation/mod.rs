//! Seeded time-domain generation of noise, ARMA, FIARMA and power-law paths.
//!
//! Gaussian draws come from one ChaCha stream per `(seed, replication, t)`,
//! so every path is reproducible bit for bit regardless of thread count.

mod arma;
mod config;
mod convolve;
mod duker;
mod fiarma;
mod monte_carlo;
mod noise;
mod path;

pub use arma::{default_arma_burnin, simulate_arma};
pub use config::{NoiseKind, SimConfig, DEFAULT_K_TRUNC};
pub use duker::{simulate_duker, verify_longmemory_decomposition, LongMemoryReport};
pub use fiarma::{fiarma_admissibility, simulate_fiarma, FiarmaSimulator, Truncation};
pub use monte_carlo::averaged_periodogram;
pub use noise::gaussian_white_noise;
pub use path::{PathMeta, SampledPath};

//! Spectral densities, autocovariances and their sample analogues.
//!
//! Densities are stored with respect to Lebesgue measure on `(−π, π]` with
//! the `1/(2π)` folded in, so that `Γ(h) = ∫ e^{iλh} g(λ) dλ` and white noise
//! has `g = Σ/(2π)`.

mod density;
mod empirical;
mod local;
mod model;

pub use density::{
    arma_spectral_density, arma_spectral_density_with, autocov_from_density, autocov_sequence,
    cross_spectral_kernel, fiarma_spectral_density, fiarma_spectral_density_with, fourier_frequencies,
    offset_grid, AutocovarianceSequence, Normalization, SpectralDensityGrid,
};
pub use empirical::{empirical_autocov, periodogram, periodogram_with};
pub use local::{local_factorization, LocalFactorization};
pub use model::{ArmaModel, FiarmaModel, CIRCLE_GRID};

//! Hilbert-valued FIARMA processes on finite grid discretizations.
//!
//! The ambient space `L²(V, ξ)` is represented by a [`HilbertGrid`]: a set of
//! atoms with positive quadrature weights. Operators are dense complex
//! matrices in the orthonormal basis `e_i = 1_{v_i} / √w_i`, so plain matrix
//! singular values are the operator singular values.
//!
//! Module map:
//! - [`hilbert`]: grids, operators, Schatten norms, normal decomposition,
//!   matrix functions and integral kernels.
//! - [`transfer`]: operator polynomials, ARMA and fractional transfer
//!   functions, MA(∞) coefficient engines and the power-law decomposition of
//!   `(1 − z)^{N − Id}`.
//! - [`spectral`]: spectral densities, autocovariances, periodograms and
//!   cross-spectral kernels.
//! - [`existence`]: conditions under which the fractional filter applies to
//!   an ARMA process.
//! - [`simulation`]: seeded path generation.
//! - [`io`]: JSON model configuration and path file formats.

pub mod error;
pub mod existence;
pub mod hilbert;
pub mod io;
pub mod parallel;
pub mod simulation;
pub mod spectral;
pub mod transfer;

pub use error::{Error, Result};
pub use hilbert::{HilbertGrid, LinearOperator, NormalDecomposition};
pub use num_complex::Complex64 as C64;
pub use parallel::Execution;

/// Library version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

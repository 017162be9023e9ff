//! Existence conditions for fractional integration of ARMA processes and
//! the numerical existence integral near the zero frequency.

mod conditions;
mod duker;
mod integral;
mod quadrature;

pub use conditions::{check_conditions, sigma_w, ExistenceReport, Verdict, DEFAULT_SUPPORT_TOL};
pub use duker::{check_duker_conditions, DukerConditionReport};
pub use integral::{existence_integral, existence_integral_with, ExistenceIntegral};
pub use quadrature::gauss_legendre;

/// Tolerance for accepting `D` (or `N`) as normal.
pub const NORMAL_TOL: f64 = 1e-10;

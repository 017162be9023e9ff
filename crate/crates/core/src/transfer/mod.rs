//! Operator polynomials, transfer functions and MA(∞) coefficient engines.

mod coeffs;
mod duker;
mod envelope;
mod fractional;
mod laurent;
mod poly;

pub use coeffs::{CoefficientKind, CoefficientSequence};
pub use duker::{duker_decomposition, duker_decomposition_with, tail_zeta_scaled, DukerDecomposition, EULER_GAMMA};
pub use envelope::{envelope_bounds, envelope_middle};
pub use fractional::{frac_ma_coeffs, frac_transfer, FracIntegrationSpec};
pub use laurent::{ar_inverse_laurent, ar_inverse_laurent_with, LaurentInverse};
pub use poly::{
    arma_transfer, check_invertible_on_circle, check_invertible_on_circle_with, eval_poly_ar,
    eval_poly_ma, CircleCheck, OperatorPolynomial,
};

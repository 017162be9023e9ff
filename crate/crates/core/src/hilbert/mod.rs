//! Finite-dimensional stand-in for `L²(V, ξ)` and bounded operators on it.

mod grid;
mod kernel;
mod matfun;
mod normal;
mod operator;

pub use grid::HilbertGrid;
pub use kernel::{kernel_l2_norm_sq, kernel_of, operator_of_kernel};
pub use matfun::{
    min_eigenvalue, operator_exp, operator_power, operator_power_one_minus_z,
    operator_power_one_minus_z_expm,
    sqrt_psd, sqrt_psd_default,
};
pub use normal::{is_normal, normal_decompose, NormalDecomposition};
pub use operator::{schatten_norm, LinearOperator, Matrix};

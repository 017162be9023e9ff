use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hilbert::LinearOperator;
use crate::parallel::Execution;
use crate::C64;

/// Operator polynomial with identity constant term.
///
/// The same coefficient list is read as `Id − Σ A_k z^k` by
/// [`eval_poly_ar`] and as `Id + Σ B_k z^k` by [`eval_poly_ma`].
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorPolynomial {
    dim: usize,
    coeffs: Vec<LinearOperator>,
}

impl OperatorPolynomial {
    pub fn new(dim: usize, coeffs: Vec<LinearOperator>) -> Result<Self> {
        if let Some((k, c)) = coeffs.iter().enumerate().find(|(_, c)| c.dim() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "coefficient {} has size {} but the polynomial acts on dimension {dim}",
                k + 1,
                c.dim()
            )));
        }
        Ok(Self { dim, coeffs })
    }

    /// Degree-0 polynomial, constant `Id`.
    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            coeffs: Vec::new(),
        }
    }

    /// Degree-1 polynomial with coefficient `c · Id`.
    pub fn scalar_lag1(dim: usize, c: f64) -> Self {
        Self {
            dim,
            coeffs: vec![LinearOperator::scalar(dim, C64::new(c, 0.0))],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficients of `z^1..z^m`.
    pub fn coeffs(&self) -> &[LinearOperator] {
        &self.coeffs
    }

    /// True when every coefficient is exactly zero, i.e. the polynomial is `Id`.
    pub fn is_identity(&self) -> bool {
        self.coeffs.iter().all(LinearOperator::is_zero)
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(LinearOperator::is_real)
    }

    fn weighted_sum(&self, z: C64) -> LinearOperator {
        let mut acc = LinearOperator::zeros(self.dim);
        let mut zk = C64::new(1.0, 0.0);
        for c in &self.coeffs {
            zk *= z;
            acc += &c.scale(zk);
        }
        acc
    }

    /// Conjugation `U P U^H` of every coefficient.
    pub fn conjugate(&self, u: &LinearOperator) -> Self {
        let uh = u.adjoint();
        Self {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|c| &(u * c) * &uh).collect(),
        }
    }
}

/// `φ(z) = Id − Σ A_k z^k`.
pub fn eval_poly_ar(phi: &OperatorPolynomial, z: C64) -> LinearOperator {
    &LinearOperator::identity(phi.dim) - &phi.weighted_sum(z)
}

/// `θ(z) = Id + Σ B_k z^k`.
pub fn eval_poly_ma(theta: &OperatorPolynomial, z: C64) -> LinearOperator {
    &LinearOperator::identity(theta.dim) + &theta.weighted_sum(z)
}

/// Outcome of the grid scan of `λ ↦ φ(e^{−iλ})` over the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CircleCheck {
    pub invertible: bool,
    pub min_singular_value: f64,
    /// Frequency where the minimum was attained.
    pub argmin_lambda: f64,
    /// `max_λ ‖φ(e^{−iλ})‖_∞`, the scale of the safety margin.
    pub max_norm: f64,
    pub grid_size: usize,
}

/// Dense-grid certificate that `φ(e^{−iλ})` is invertible on the whole
/// circle: declared invertible iff `min σ > 1e−8 · max ‖φ‖`.
pub fn check_invertible_on_circle(phi: &OperatorPolynomial, grid_size: usize) -> Result<CircleCheck> {
    check_invertible_on_circle_with(phi, grid_size, Execution::default())
}

pub fn check_invertible_on_circle_with(
    phi: &OperatorPolynomial,
    grid_size: usize,
    exec: Execution,
) -> Result<CircleCheck> {
    if grid_size < 8 {
        return Err(Error::InvalidArgument(format!(
            "circle grid needs at least 8 points, got {grid_size}"
        )));
    }
    if phi.degree() == 0 {
        return Ok(CircleCheck {
            invertible: true,
            min_singular_value: 1.0,
            argmin_lambda: 0.0,
            max_norm: 1.0,
            grid_size,
        });
    }
    let scan = exec.map(grid_size, |j| {
        // λ_j = −π + 2π(j + 1)/M covers (−π, π] and hits λ = 0 when M is even
        let lambda = -PI + 2.0 * PI * (j + 1) as f64 / grid_size as f64;
        let sv = eval_poly_ar(phi, C64::from_polar(1.0, -lambda)).singular_values();
        let lo = sv.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = sv.iter().copied().fold(0.0, f64::max);
        (lambda, lo, hi)
    });
    let (argmin_lambda, min_sv, _) = scan
        .iter()
        .copied()
        .fold((0.0, f64::INFINITY, 0.0), |acc, x| if x.1 < acc.1 { x } else { acc });
    let max_norm = scan.iter().map(|x| x.2).fold(0.0, f64::max);
    Ok(CircleCheck {
        invertible: min_sv > 1e-8 * max_norm,
        min_singular_value: min_sv,
        argmin_lambda,
        max_norm,
        grid_size,
    })
}

/// `[φ(e^{−iλ})]^{−1} θ(e^{−iλ})` by a linear solve.
pub fn arma_transfer(phi: &OperatorPolynomial, theta: &OperatorPolynomial, lambda: f64) -> Result<LinearOperator> {
    if phi.dim != theta.dim {
        return Err(Error::DimensionMismatch(format!(
            "AR polynomial on dimension {} but MA polynomial on {}",
            phi.dim, theta.dim
        )));
    }
    let z = C64::from_polar(1.0, -lambda);
    let th = eval_poly_ma(theta, z);
    if phi.degree() == 0 {
        return Ok(th);
    }
    let ph = eval_poly_ar(phi, z);
    ph.solve(&th).ok_or_else(|| Error::Singular {
        lambda,
        min_sv: ph.min_singular_value(),
    })
}

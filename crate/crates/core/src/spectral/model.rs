use crate::error::{Error, Result};
use crate::hilbert::{min_eigenvalue, sqrt_psd, LinearOperator};
use crate::transfer::{check_invertible_on_circle, FracIntegrationSpec, OperatorPolynomial};

/// Default circle scan resolution used to validate AR polynomials.
pub const CIRCLE_GRID: usize = 4096;

/// ARMA model `φ(B) X_t = θ(B) Z_t` with noise covariance `Σ`.
#[derive(Debug, Clone)]
pub struct ArmaModel {
    phi: OperatorPolynomial,
    theta: OperatorPolynomial,
    sigma: LinearOperator,
    sigma_sqrt: LinearOperator,
}

impl ArmaModel {
    pub fn new(phi: OperatorPolynomial, theta: OperatorPolynomial, sigma: LinearOperator) -> Result<Self> {
        let n = sigma.dim();
        if phi.dim() != n || theta.dim() != n {
            return Err(Error::DimensionMismatch(format!(
                "phi on {}, theta on {}, Sigma on {n}",
                phi.dim(),
                theta.dim()
            )));
        }
        let tol = 1e-10 * sigma.op_norm();
        let sigma_sqrt = match sqrt_psd(&sigma, tol) {
            Ok(s) => s,
            Err(Error::NotPsd { min_eig }) => return Err(Error::NotPsd { min_eig }),
            Err(e) => return Err(e),
        };
        let check = check_invertible_on_circle(&phi, CIRCLE_GRID)?;
        if !check.invertible {
            return Err(Error::Singular {
                lambda: check.argmin_lambda,
                min_sv: check.min_singular_value,
            });
        }
        Ok(Self {
            phi,
            theta,
            sigma,
            sigma_sqrt,
        })
    }

    /// `φ = θ = Id`: the noise itself.
    pub fn white_noise(sigma: LinearOperator) -> Result<Self> {
        let n = sigma.dim();
        Self::new(OperatorPolynomial::identity(n), OperatorPolynomial::identity(n), sigma)
    }

    pub fn phi(&self) -> &OperatorPolynomial {
        &self.phi
    }

    pub fn theta(&self) -> &OperatorPolynomial {
        &self.theta
    }

    pub fn sigma(&self) -> &LinearOperator {
        &self.sigma
    }

    pub fn sigma_sqrt(&self) -> &LinearOperator {
        &self.sigma_sqrt
    }

    pub fn dim(&self) -> usize {
        self.sigma.dim()
    }

    pub fn is_white_noise(&self) -> bool {
        self.phi.is_identity() && self.theta.is_identity()
    }

    pub fn is_real(&self) -> bool {
        self.phi.is_real() && self.theta.is_real() && self.sigma.is_real()
    }

    pub fn min_sigma_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.sigma)
    }
}

/// FIARMA model: the fractional filter `F_D` applied to an ARMA process.
#[derive(Debug, Clone)]
pub struct FiarmaModel {
    pub base: ArmaModel,
    pub frac: FracIntegrationSpec,
}

impl FiarmaModel {
    pub fn new(base: ArmaModel, frac: FracIntegrationSpec) -> Result<Self> {
        if frac.dim() != base.dim() {
            return Err(Error::DimensionMismatch(format!(
                "D on {} but ARMA model on {}",
                frac.dim(),
                base.dim()
            )));
        }
        Ok(Self { base, frac })
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn is_real(&self) -> bool {
        self.base.is_real() && self.frac.operator().is_real()
    }
}

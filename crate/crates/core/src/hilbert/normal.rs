use nalgebra::SymmetricEigen;

use super::operator::{LinearOperator, Matrix};
use crate::error::{Error, Result};
use crate::C64;

/// Unitary diagonalization `U N U^H = diag(d)` of a normal operator.
///
/// `d[i]` is the value of the singular value function at grid point `i`;
/// `N = U^H diag(d) U`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalDecomposition {
    pub u: LinearOperator,
    pub d: Vec<C64>,
}

/// `‖A A^H − A^H A‖_∞ ≤ tol · ‖A‖_∞²`.
pub fn is_normal(a: &LinearOperator, tol: f64) -> bool {
    commutator_norm(a) <= tol * a.op_norm().powi(2)
}

fn commutator_norm(a: &LinearOperator) -> f64 {
    let m = a.matrix();
    let ah = m.adjoint();
    LinearOperator::from_matrix(m * &ah - &ah * m).op_norm()
}

// Irrational mixing weights for the Hermitian pencil; retried in order when
// a combination happens to merge two distinct eigenvalues.
const MIX: [f64; 4] = [0.754_877_666_246_692_7, 1.324_717_957_244_746, 0.414_213_562_373_095, 2.718_281_828_459_045];

/// Diagonalizes a normal operator via the Hermitian pencil `Re N + c · Im N`.
pub fn normal_decompose(n: &LinearOperator, tol: f64) -> Result<NormalDecomposition> {
    if !is_normal(n, tol) {
        return Err(Error::NotNormal {
            commutator: commutator_norm(n),
        });
    }
    let scale = n.op_norm();
    let dim = n.dim();
    if scale == 0.0 {
        return Ok(NormalDecomposition {
            u: LinearOperator::identity(dim),
            d: vec![C64::new(0.0, 0.0); dim],
        });
    }
    let m = n.matrix();
    let re_part = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let im_part = (m - m.adjoint()) * C64::new(0.0, -0.5);
    let mut best: Option<(f64, NormalDecomposition)> = None;
    for c in MIX {
        let pencil = &re_part + &im_part * C64::new(c, 0.0);
        let eig = SymmetricEigen::new(pencil);
        let u: Matrix = eig.eigenvectors.adjoint();
        let t = &u * m * u.adjoint();
        let d: Vec<C64> = (0..dim).map(|i| t[(i, i)]).collect();
        let dec = NormalDecomposition {
            u: LinearOperator::from_matrix(u),
            d,
        };
        let err = dec.reconstruct().dist(n);
        if err <= tol.max(1e-13) * scale {
            return Ok(dec);
        }
        if best.as_ref().is_none_or(|(e, _)| err < *e) {
            best = Some((err, dec));
        }
    }
    let (err, _) = best.expect("at least one attempt");
    Err(Error::Numerical(format!(
        "unitary diagonalization failed: reconstruction error {:.3e} exceeds {:.3e}",
        err,
        tol * scale
    )))
}

impl NormalDecomposition {
    /// `U^H diag(d) U`.
    pub fn reconstruct(&self) -> LinearOperator {
        self.map(|z| z)
    }

    /// Functional calculus: `f(N) = U^H diag(f(d_i)) U`.
    pub fn map(&self, f: impl Fn(C64) -> C64) -> LinearOperator {
        let u = self.u.matrix();
        let n = self.d.len();
        let fd: Vec<C64> = self.d.iter().map(|&z| f(z)).collect();
        // diag(fd) U by row scaling, then U^H on the left
        let mut scaled = u.clone();
        for i in 0..n {
            for j in 0..n {
                scaled[(i, j)] *= fd[i];
            }
        }
        LinearOperator::from_matrix(u.adjoint() * scaled)
    }

    /// Essential infimum of `Re d` over the grid.
    pub fn min_re(&self) -> f64 {
        self.d.iter().map(|z| z.re).fold(f64::INFINITY, f64::min)
    }

    pub fn max_re(&self) -> f64 {
        self.d.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn dim(&self) -> usize {
        self.d.len()
    }

    /// `‖U U^H − Id‖_∞`.
    pub fn unitarity_error(&self) -> f64 {
        let u = self.u.matrix();
        LinearOperator::from_matrix(u * u.adjoint()).dist(&LinearOperator::identity(self.dim()))
    }

    /// Checks that this decomposition reproduces `n` within `tol · ‖n‖_∞`.
    pub fn validate(&self, n: &LinearOperator, tol: f64) -> Result<()> {
        if self.dim() != n.dim() || self.u.dim() != n.dim() {
            return Err(Error::DimensionMismatch(format!(
                "decomposition of size {} for operator of size {}",
                self.dim(),
                n.dim()
            )));
        }
        let err = self.reconstruct().dist(n);
        if err > tol * n.op_norm().max(f64::MIN_POSITIVE) {
            return Err(Error::Numerical(format!(
                "decomposition does not reproduce operator (error {err:.3e})"
            )));
        }
        Ok(())
    }
}

use std::f64::consts::TAU;

use super::coeffs::{CoefficientKind, CoefficientSequence};
use crate::error::Result;
use crate::hilbert::{normal_decompose, operator_power_one_minus_z, LinearOperator, NormalDecomposition};
use crate::C64;

/// Long-memory operator `D` of a fractional integration filter, optionally
/// with its unitary diagonalization.
#[derive(Debug, Clone, PartialEq)]
pub struct FracIntegrationSpec {
    d: LinearOperator,
    decomposition: Option<NormalDecomposition>,
}

impl FracIntegrationSpec {
    /// Any bounded `D`; no decomposition is attached.
    pub fn new(d: LinearOperator) -> Self {
        Self { d, decomposition: None }
    }

    /// Normal `D` with its decomposition computed and cached.
    pub fn normal(d: LinearOperator, tol: f64) -> Result<Self> {
        let dec = normal_decompose(&d, tol)?;
        Ok(Self {
            d,
            decomposition: Some(dec),
        })
    }

    /// Attaches a caller-supplied decomposition after checking it reproduces `D`.
    pub fn with_decomposition(d: LinearOperator, dec: NormalDecomposition, tol: f64) -> Result<Self> {
        dec.validate(&d, tol)?;
        Ok(Self {
            d,
            decomposition: Some(dec),
        })
    }

    /// Scalar operator `d · Id`.
    pub fn scalar(dim: usize, d: f64) -> Self {
        let op = LinearOperator::scalar(dim, C64::new(d, 0.0));
        Self {
            d: op,
            decomposition: Some(NormalDecomposition {
                u: LinearOperator::identity(dim),
                d: vec![C64::new(d, 0.0); dim],
            }),
        }
    }

    pub fn operator(&self) -> &LinearOperator {
        &self.d
    }

    pub fn decomposition(&self) -> Option<&NormalDecomposition> {
        self.decomposition.as_ref()
    }

    /// Cached decomposition, or a fresh one when `D` is normal.
    pub fn decomposition_or_compute(&self, tol: f64) -> Result<NormalDecomposition> {
        match &self.decomposition {
            Some(dec) => Ok(dec.clone()),
            None => normal_decompose(&self.d, tol),
        }
    }

    pub fn dim(&self) -> usize {
        self.d.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.d.is_zero()
    }
}

fn is_zero_frequency(lambda: f64) -> bool {
    let r = lambda.rem_euclid(TAU);
    r.min(TAU - r) <= 4.0 * f64::EPSILON * lambda.abs().max(1.0)
}

/// `F_D(λ) = (1 − e^{−iλ})^{−D}` for `λ ≢ 0`, the zero operator at `λ ≡ 0`.
pub fn frac_transfer(spec: &FracIntegrationSpec, lambda: f64) -> LinearOperator {
    let n = spec.dim();
    if is_zero_frequency(lambda) {
        return LinearOperator::zeros(n);
    }
    let z = C64::from_polar(1.0, -lambda);
    match &spec.decomposition {
        Some(dec) => {
            let log = (C64::new(1.0, 0.0) - z).ln();
            dec.map(|d| (-d * log).exp())
        }
        None => operator_power_one_minus_z(&-&spec.d, z).expect("e^{-iλ} with λ ≠ 0 is off the branch cut"),
    }
}

/// MA(∞) coefficients of `(1 − z)^{−D}`:
/// `C_0 = Id`, `C_k = C_{k−1} (D + (k − 1) Id) / k`.
pub fn frac_ma_coeffs(spec: &FracIntegrationSpec, k_max: usize) -> CoefficientSequence {
    let n = spec.dim();
    let mut ops = Vec::with_capacity(k_max + 1);
    ops.push(LinearOperator::identity(n));
    for k in 1..=k_max {
        let shifted = &spec.d + &LinearOperator::scalar(n, C64::new((k - 1) as f64, 0.0));
        let next = (&ops[k - 1] * &shifted).scale(C64::new(1.0 / k as f64, 0.0));
        ops.push(next);
    }
    CoefficientSequence::new(0, ops, CoefficientKind::FracBinomial)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn transfer_is_zero_at_origin() {
        let spec = FracIntegrationSpec::scalar(3, 0.3);
        assert!(frac_transfer(&spec, 0.0).is_zero());
        assert!(frac_transfer(&spec, TAU).is_zero());
        assert!(frac_transfer(&spec, -TAU).is_zero());
    }

    #[test]
    fn transfer_examples() {
        let zero = FracIntegrationSpec::new(LinearOperator::zeros(2));
        assert!(frac_transfer(&zero, 1.0).dist(&LinearOperator::identity(2)) < 1e-15);

        let half = FracIntegrationSpec::new(LinearOperator::scalar(2, C64::new(0.5, 0.0)));
        let t = frac_transfer(&half, PI);
        let want = 2f64.powf(-0.5);
        assert!(t.dist(&LinearOperator::scalar(2, C64::new(want, 0.0))) < 1e-14);
        // cached-decomposition route agrees
        let t2 = frac_transfer(&FracIntegrationSpec::scalar(2, 0.5), PI);
        assert!(t.dist(&t2) < 1e-14);
    }

    #[test]
    fn coefficient_examples() {
        let c = frac_ma_coeffs(&FracIntegrationSpec::new(LinearOperator::zeros(2)), 5);
        assert_eq!(c.ops[0], LinearOperator::identity(2));
        assert!(c.ops[1..].iter().all(LinearOperator::is_zero));

        let c = frac_ma_coeffs(&FracIntegrationSpec::scalar(2, 1.0), 20);
        assert!(c.ops.iter().all(|op| op.dist(&LinearOperator::identity(2)) < 1e-14));

        let c = frac_ma_coeffs(&FracIntegrationSpec::scalar(1, 0.3), 2);
        assert!((c.ops[1].get(0, 0).re - 0.3).abs() < 1e-15);
        assert!((c.ops[2].get(0, 0).re - 0.195).abs() < 1e-15);
    }
}

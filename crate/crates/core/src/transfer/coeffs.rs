use serde::Serialize;

use crate::hilbert::LinearOperator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoefficientKind {
    /// Coefficients of `(1 − z)^{−D}`.
    FracBinomial,
    /// Laurent coefficients of `φ(z)^{−1}`.
    ArLaurent,
    /// Short-memory remainder of the power-law decomposition.
    DukerDelta,
    /// Power-law weights `(k + 1)^{−N}`.
    PowerLaw,
}

/// Indexed operator sequence `C_start, C_{start+1}, ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSequence {
    pub start: i64,
    pub ops: Vec<LinearOperator>,
    pub kind: CoefficientKind,
}

impl CoefficientSequence {
    pub fn new(start: i64, ops: Vec<LinearOperator>, kind: CoefficientKind) -> Self {
        Self { start, ops, kind }
    }

    pub fn get(&self, k: i64) -> Option<&LinearOperator> {
        let idx = k.checked_sub(self.start)?;
        usize::try_from(idx).ok().and_then(|i| self.ops.get(i))
    }

    /// Last index held.
    pub fn end(&self) -> i64 {
        self.start + self.ops.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &LinearOperator)> {
        self.ops.iter().enumerate().map(move |(i, c)| (self.start + i as i64, c))
    }

    pub fn op_norms(&self) -> Vec<f64> {
        self.ops.iter().map(LinearOperator::op_norm).collect()
    }

    /// `Σ_k C_k z^k` over the stored indices.
    pub fn evaluate(&self, z: crate::C64) -> LinearOperator {
        let n = self.ops.first().map_or(1, LinearOperator::dim);
        let mut acc = LinearOperator::zeros(n);
        for (k, c) in self.iter() {
            acc += &c.scale(z.powi(k as i32));
        }
        acc
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weighted atoms discretizing `L²(V, ξ)`: `ξ ≈ Σ w_i δ_{v_i}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HilbertGrid {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl HilbertGrid {
    pub fn new(points: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("grid needs at least one point".into()));
        }
        if points.len() != weights.len() {
            return Err(Error::DimensionMismatch(format!(
                "grid has {} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w > 0.0))
        {
            return Err(Error::InvalidArgument(format!(
                "grid weight {i} must be finite and positive, got {w}"
            )));
        }
        Ok(Self { points, weights })
    }

    /// `n` midpoints of `(0, 1)` with weights `1/n`.
    pub fn uniform(n: usize) -> Result<Self> {
        let h = 1.0 / n as f64;
        Self::new(
            (0..n).map(|i| (i as f64 + 0.5) * h).collect(),
            vec![h; n],
        )
    }

    /// `n` right endpoints `i/n` of `(0, 1]` with weights `1/n`.
    pub fn right_endpoints(n: usize) -> Result<Self> {
        let h = 1.0 / n as f64;
        Self::new((1..=n).map(|i| i as f64 * h).collect(), vec![h; n])
    }

    /// Single atom of unit mass: the scalar case.
    pub fn scalar() -> Self {
        Self {
            points: vec![0.0],
            weights: vec![1.0],
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Function values `f(v_i)` to orthonormal coordinates `f(v_i) √w_i`.
    pub fn to_coords(&self, values: &[crate::C64]) -> Vec<crate::C64> {
        values
            .iter()
            .zip(&self.weights)
            .map(|(f, w)| f * w.sqrt())
            .collect()
    }

    /// Inverse of [`HilbertGrid::to_coords`].
    pub fn to_values(&self, coords: &[crate::C64]) -> Vec<crate::C64> {
        coords
            .iter()
            .zip(&self.weights)
            .map(|(c, w)| c / w.sqrt())
            .collect()
    }
}

use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::hilbert::LinearOperator;
use crate::C64;

/// Kernels shorter than this are applied directly.
const DIRECT_LIMIT: usize = 64;

/// Causal truncated convolution `y_p = Σ_{k ≤ min(K, p)} C_k x_{p−k}` on
/// row-major paths of a fixed length, prepared once per kernel.
pub(crate) struct Convolution {
    n: usize,
    coeffs: Vec<LinearOperator>,
    len: usize,
    fft: Option<FftKernel>,
}

struct FftKernel {
    size: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    /// `ĉ_ij` for every entry `(i, j)`, flattened as `i * n + j`.
    hat: Vec<Vec<C64>>,
}

impl Convolution {
    /// Trailing zero coefficients are dropped, so `[Id, 0, 0, ..]` is an exact copy.
    pub fn new(coeffs: &[LinearOperator], len: usize) -> Self {
        let n = coeffs[0].dim();
        let keep = coeffs.iter().rposition(|c| !c.is_zero()).map_or(1, |k| k + 1);
        let coeffs = &coeffs[..keep];
        let fft = (coeffs.len() > DIRECT_LIMIT).then(|| {
            let size = (len + coeffs.len()).next_power_of_two();
            let mut planner = FftPlanner::new();
            let forward = planner.plan_fft_forward(size);
            let inverse = planner.plan_fft_inverse(size);
            let hat = (0..n * n)
                .map(|ij| {
                    let (i, j) = (ij / n, ij % n);
                    let mut col = vec![C64::new(0.0, 0.0); size];
                    for (k, c) in coeffs.iter().enumerate() {
                        col[k] = c.get(i, j);
                    }
                    forward.process(&mut col);
                    col
                })
                .collect();
            FftKernel {
                size,
                forward,
                inverse,
                hat,
            }
        });
        Self {
            n,
            coeffs: coeffs.to_vec(),
            len,
            fft,
        }
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.len * self.n, "path length fixed at construction");
        match &self.fft {
            Some(k) => self.apply_fft(k, x),
            None => convolve_direct(&self.coeffs, x, self.n),
        }
    }

    fn apply_fft(&self, k: &FftKernel, x: &[C64]) -> Vec<C64> {
        let n = self.n;
        let zero = C64::new(0.0, 0.0);
        let x_hat: Vec<Vec<C64>> = (0..n)
            .map(|j| {
                let mut col = vec![zero; k.size];
                for t in 0..self.len {
                    col[t] = x[t * n + j];
                }
                k.forward.process(&mut col);
                col
            })
            .collect();
        let scale = 1.0 / k.size as f64;
        let mut y = vec![zero; self.len * n];
        for i in 0..n {
            let mut acc = vec![zero; k.size];
            for j in 0..n {
                let c = &k.hat[i * n + j];
                for ((a, c), x) in acc.iter_mut().zip(c).zip(&x_hat[j]) {
                    *a += c * x;
                }
            }
            k.inverse.process(&mut acc);
            for t in 0..self.len {
                y[t * n + i] = acc[t] * scale;
            }
        }
        y
    }
}

pub(crate) fn convolve_direct(coeffs: &[LinearOperator], x: &[C64], n: usize) -> Vec<C64> {
    let len = x.len() / n;
    let mut y = vec![C64::new(0.0, 0.0); x.len()];
    for p in 0..len {
        let out = &mut y[p * n..(p + 1) * n];
        for (k, c) in coeffs.iter().enumerate().take(p + 1) {
            let row = &x[(p - k) * n..(p - k + 1) * n];
            let m = c.matrix();
            for (i, o) in out.iter_mut().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    *o += m[(i, j)] * v;
                }
            }
        }
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fft_matches_direct() {
        let n = 2;
        let coeffs: Vec<LinearOperator> = (0..150)
            .map(|k| {
                let f = 1.0 / (k as f64 + 1.0);
                LinearOperator::from_fn(n, |i, j| C64::new(f * (i + 1) as f64, 0.3 * f * j as f64)).unwrap()
            })
            .collect();
        let len = 300;
        let x: Vec<C64> = (0..len * n)
            .map(|i| C64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let conv = Convolution::new(&coeffs, len);
        assert!(conv.fft.is_some());
        let a = conv.apply(&x);
        let b = convolve_direct(&coeffs, &x, n);
        let err = a.iter().zip(&b).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn identity_kernel() {
        let x: Vec<C64> = (0..10).map(|i| C64::new(i as f64, 0.0)).collect();
        let y = Convolution::new(&[LinearOperator::identity(1)], 10).apply(&x);
        assert_eq!(x, y);
    }
}

//! Power-law decomposition `(1 − z)^{N − Id} = C Σ (k+1)^{−N} z^k + Σ Δ_k z^k`.
//!
//! `C` follows the closed form
//!
//! ```text
//! C = Π_{j<k₀} (Id − N/j) · exp(−N (γ − H_{k₀−1})) · exp(−Σ_{j≥2} (N/k₀)^j β_j / j)
//! ```
//!
//! with `k₀ = ⌊‖N‖⌋ + 1`, `H_m` the harmonic numbers and
//! `β_j = Σ_{t≥k₀} (k₀/t)^j`. For scalar `N = n` this is `1/Γ(1 − n)`.
//! The remainders `Δ_k` are taken as residuals `b_k − C (k+1)^{−N}` where
//! `b_k` are the binomial coefficients of `(1 − z)^{N − Id}`.

use super::coeffs::{CoefficientKind, CoefficientSequence};
use super::fractional::{frac_ma_coeffs, FracIntegrationSpec};
use crate::error::Result;
use crate::hilbert::{normal_decompose, operator_exp, LinearOperator, NormalDecomposition};
use crate::parallel::Execution;
use crate::C64;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;

const NORMAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct DukerDecomposition {
    pub c: LinearOperator,
    /// `Δ_0..Δ_K`.
    pub deltas: CoefficientSequence,
    /// `b_0..b_K`, coefficients of `(1 − z)^{N − Id}`.
    pub binomial: CoefficientSequence,
    /// `min Re n` over the grid.
    pub rho: f64,
    pub k0: usize,
    pub decomposition: NormalDecomposition,
}

impl DukerDecomposition {
    /// `(k + 1)^{−N}` through the unitary diagonalization of `N`.
    pub fn power_weight(&self, k: usize) -> LinearOperator {
        power_weight(&self.decomposition, k)
    }

    /// `‖Δ_k‖_∞` for every stored `k`.
    pub fn delta_norms(&self) -> Vec<f64> {
        self.deltas.op_norms()
    }
}

pub(crate) fn power_weight(dec: &NormalDecomposition, k: usize) -> LinearOperator {
    let l = ((k + 1) as f64).ln();
    dec.map(|n| (-n * l).exp())
}

pub fn duker_decomposition(n: &LinearOperator, k_max: usize) -> Result<DukerDecomposition> {
    duker_decomposition_with(n, k_max, Execution::default())
}

pub fn duker_decomposition_with(n: &LinearOperator, k_max: usize, exec: Execution) -> Result<DukerDecomposition> {
    let dec = normal_decompose(n, NORMAL_TOL)?;
    let dim = n.dim();
    let rho = dec.min_re();
    let norm = n.op_norm();
    let k0 = norm.floor() as usize + 1;
    let id = LinearOperator::identity(dim);
    let re = |x: f64| C64::new(x, 0.0);

    let mut product = id.clone();
    let mut harmonic = 0.0;
    for j in 1..k0 {
        product = &product * &(&id - &n.scale(re(1.0 / j as f64)));
        harmonic += 1.0 / j as f64;
    }
    let euler_factor = operator_exp(&n.scale(re(-(EULER_GAMMA - harmonic))));

    // Σ_{j≥2} (N/k₀)^j β_j / j, stopped once ‖N/k₀‖^j / j < 1e−16
    let ratio = norm / k0 as f64;
    let scaled = n.scale(re(1.0 / k0 as f64));
    let mut series = LinearOperator::zeros(dim);
    let mut power = scaled.clone();
    let mut j = 1usize;
    if ratio > 0.0 {
        loop {
            j += 1;
            power = &power * &scaled;
            let beta = tail_zeta_scaled(j as f64, k0 as f64);
            series += &power.scale(re(beta / j as f64));
            if ratio.powi(j as i32) / j as f64 <= 1e-16 {
                break;
            }
        }
    }
    let tail_factor = operator_exp(&series.scale(re(-1.0)));
    let c = &(&product * &euler_factor) * &tail_factor;

    let binomial = frac_ma_coeffs(&FracIntegrationSpec::new(&id - n), k_max);
    let deltas = exec.map(k_max + 1, |k| &binomial.ops[k] - &(&c * &power_weight(&dec, k)));
    Ok(DukerDecomposition {
        c,
        deltas: CoefficientSequence::new(0, deltas, CoefficientKind::DukerDelta),
        binomial,
        rho,
        k0,
        decomposition: dec,
    })
}

const BERNOULLI_OVER_FACTORIAL: [f64; 7] = [
    1.0 / 12.0,                   // B2/2!
    -1.0 / 720.0,                 // B4/4!
    1.0 / 30_240.0,               // B6/6!
    -1.0 / 1_209_600.0,           // B8/8!
    1.0 / 47_900_160.0,           // B10/10!
    -691.0 / 1_307_674_368_000.0, // B12/12!
    1.0 / 74_724_249_600.0,       // B14/14!
];

/// `β = Σ_{t ≥ a} (a/t)^s` for integer `a ≥ 1`, `s > 1`: a scaled Hurwitz zeta
/// `a^s ζ(s, a)`.
///
/// Small `s` uses Euler–Maclaurin after a direct head; large `s` converges
/// geometrically and is summed directly.
pub fn tail_zeta_scaled(s: f64, a: f64) -> f64 {
    assert!(s > 1.0 && a >= 1.0, "tail_zeta_scaled needs s > 1 and a >= 1");
    let term = |t: f64| (a / t).powf(s);
    if s > 40.0 {
        let mut sum = 0.0;
        let mut t = a;
        loop {
            let x = term(t);
            sum += x;
            if x <= 1e-18 * sum {
                return sum;
            }
            t += 1.0;
        }
    }
    let head = 16.0f64.max((2.0 * s).ceil());
    let mut sum = 0.0;
    let mut t = a;
    while t < a + head {
        sum += term(t);
        t += 1.0;
    }
    // Euler–Maclaurin tail from x = t
    let f = term(t);
    sum += t * f / (s - 1.0) + 0.5 * f;
    let mut rising = s; // s (s+1) ... (s+2m−2)
    let mut inv_pow = 1.0 / t; // t^{−(2m−1)}
    for (m, b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        if m > 0 {
            rising *= (s + 2.0 * m as f64 - 1.0) * (s + 2.0 * m as f64);
            inv_pow /= t * t;
        }
        sum += b * rising * f * inv_pow;
    }
    sum
}

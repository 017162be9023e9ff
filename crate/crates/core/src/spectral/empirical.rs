use std::f64::consts::TAU;

use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::hilbert::{LinearOperator, Matrix};
use crate::parallel::Execution;
use crate::simulation::SampledPath;
use crate::C64;

use super::density::{Normalization, SpectralDensityGrid};

/// `Γ̂(h) = (1/T) Σ_t (x_{t+h} − x̄)(x_t − x̄)^H`; `Γ̂(−h) = Γ̂(h)^H`.
pub fn empirical_autocov(path: &SampledPath, h: i64) -> Result<LinearOperator> {
    let t_len = path.len();
    if h.unsigned_abs() as usize >= t_len {
        return Err(Error::InvalidArgument(format!(
            "lag {h} needs |h| < T = {t_len}"
        )));
    }
    if h < 0 {
        return Ok(empirical_autocov(path, -h)?.adjoint());
    }
    let h = h as usize;
    let n = path.dim();
    let mean = path.mean();
    let centered: Vec<Vec<C64>> = path
        .rows()
        .map(|r| r.iter().zip(&mean).map(|(x, m)| x - m).collect())
        .collect();
    let mut acc = Matrix::zeros(n, n);
    for t in 0..t_len - h {
        let a = &centered[t + h];
        let b = &centered[t];
        for i in 0..n {
            for j in 0..n {
                acc[(i, j)] += a[i] * b[j].conj();
            }
        }
    }
    let out = LinearOperator::new(acc / C64::new(t_len as f64, 0.0))?;
    Ok(if h == 0 { out.hermitian_part() } else { out })
}

pub fn periodogram(path: &SampledPath, freqs: &[f64]) -> Result<SpectralDensityGrid> {
    periodogram_with(path, freqs, Execution::default())
}

/// `I(λ_j) = d(λ_j) d(λ_j)^H / (2πT)` with `d` the DFT of the centered path.
/// Every requested frequency must be a Fourier frequency `2πj/T`.
pub fn periodogram_with(path: &SampledPath, freqs: &[f64], exec: Execution) -> Result<SpectralDensityGrid> {
    let t_len = path.len();
    let n = path.dim();
    let indices = freqs
        .iter()
        .map(|&lambda| {
            let x = lambda * t_len as f64 / TAU;
            let j = x.round();
            if (x - j).abs() > 1e-8 * x.abs().max(1.0) {
                return Err(Error::InvalidArgument(format!(
                    "{lambda} is not a Fourier frequency 2*pi*j/{t_len}"
                )));
            }
            Ok((j as i64).rem_euclid(t_len as i64) as usize)
        })
        .collect::<Result<Vec<_>>>()?;

    let mean = path.mean();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(t_len);
    let dft: Vec<Vec<C64>> = exec.map(n, |i| {
        let mut col: Vec<C64> = path.rows().map(|r| r[i] - mean[i]).collect();
        fft.process(&mut col);
        col
    });
    let scale = 1.0 / (TAU * t_len as f64);
    let values = indices
        .iter()
        .map(|&j| {
            let d: Vec<C64> = dft.iter().map(|col| col[j]).collect();
            LinearOperator::from_fn(n, |a, b| d[a] * d[b].conj() * scale)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectralDensityGrid {
        freqs: freqs.to_vec(),
        values,
        normalization: Normalization::Lebesgue,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulation::PathMeta;
    use crate::spectral::fourier_frequencies;

    fn path(rows: &[Vec<C64>]) -> SampledPath {
        SampledPath::from_rows(rows, PathMeta::default()).unwrap()
    }

    #[test]
    fn constant_path_has_zero_autocov() {
        let p = path(&vec![vec![C64::new(1.5, -0.5), C64::new(2.0, 0.0)]; 20]);
        for h in -3..=3 {
            assert!(empirical_autocov(&p, h).unwrap().is_zero());
        }
        assert!(empirical_autocov(&p, 20).is_err());
        assert!(empirical_autocov(&p, -20).is_err());
    }

    #[test]
    fn negative_lag_is_exact_adjoint() {
        let rows: Vec<Vec<C64>> = (0..50)
            .map(|t| vec![C64::new((t as f64).sin(), (t as f64 * 0.3).cos()), C64::new(t as f64 * 0.01, 0.0)])
            .collect();
        let p = path(&rows);
        for h in 1..5 {
            assert_eq!(empirical_autocov(&p, -h).unwrap(), empirical_autocov(&p, h).unwrap().adjoint());
        }
    }

    #[test]
    fn zero_path_zero_periodogram() {
        let p = path(&vec![vec![C64::new(0.0, 0.0)]; 16]);
        let g = periodogram(&p, &fourier_frequencies(16)).unwrap();
        assert!(g.values.iter().all(LinearOperator::is_zero));
    }

    #[test]
    fn non_fourier_frequency_rejected() {
        let p = path(&vec![vec![C64::new(1.0, 0.0)]; 16]);
        assert!(periodogram(&p, &[0.3]).is_err());
        assert!(periodogram(&p, &[TAU * 3.0 / 16.0, -TAU / 16.0]).is_ok());
    }

    #[test]
    fn parseval() {
        let rows: Vec<Vec<C64>> = (0..64)
            .map(|t| {
                let x = t as f64;
                vec![C64::new((0.7 * x).sin() + 0.1 * x, 0.2 * x.cos()), C64::new((x * x * 0.01).cos(), 0.0)]
            })
            .collect();
        let p = path(&rows);
        let all: Vec<f64> = (0..64).map(|j| TAU * j as f64 / 64.0).collect();
        let g = periodogram(&p, &all).unwrap();
        let lhs: f64 = g.traces().iter().sum::<f64>() * TAU / 64.0;
        let mean = p.mean();
        let rhs: f64 = p
            .rows()
            .map(|r| r.iter().zip(&mean).map(|(x, m)| (x - m).norm_sqr()).sum::<f64>())
            .sum::<f64>()
            / 64.0;
        assert!((lhs - rhs).abs() < 1e-8 * rhs);
    }
}

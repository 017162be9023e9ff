use crate::error::{Error, Result};
use crate::hilbert::LinearOperator;
use crate::parallel::Execution;
use crate::spectral::{periodogram_with, Normalization, SpectralDensityGrid};

use super::path::SampledPath;

/// Mean periodogram over replications `0..reps`, each path produced by
/// `path(r)`. Replications run under `exec`; the average is summed in
/// replication order so the result does not depend on the thread count.
pub fn averaged_periodogram<F>(reps: usize, freqs: &[f64], exec: Execution, path: F) -> Result<SpectralDensityGrid>
where
    F: Fn(u64) -> Result<SampledPath> + Sync + Send,
{
    if reps == 0 {
        return Err(Error::InvalidArgument("need at least one replication".into()));
    }
    let grids = exec.try_map(reps, |r| {
        let p = path(r as u64)?;
        periodogram_with(&p, freqs, Execution::Sequential)
    })?;
    let n = grids[0].dim();
    let mut values = vec![LinearOperator::zeros(n); freqs.len()];
    for g in &grids {
        for (acc, v) in values.iter_mut().zip(&g.values) {
            *acc += v;
        }
    }
    let scale = 1.0 / reps as f64;
    Ok(SpectralDensityGrid {
        freqs: freqs.to_vec(),
        values: values.iter().map(|v| v.scale_re(scale)).collect(),
        normalization: Normalization::Lebesgue,
    })
}

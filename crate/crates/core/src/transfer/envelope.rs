use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::C64;

/// Two-sided power envelope of `|(1 − e^{−iλ})^z|²`:
///
/// `(2/π)^{2[Re z]₊} |λ|^{2 Re z} e^{−π|Im z|}` ≤ middle ≤
/// `(π/2)^{2[Re z]₋} |λ|^{2 Re z} e^{π|Im z|}`.
pub fn envelope_bounds(z: C64, lambda: f64) -> Result<(f64, f64)> {
    if lambda == 0.0 || !(-PI..=PI).contains(&lambda) {
        return Err(Error::Domain(format!(
            "envelope needs lambda in [-pi, pi] \\ {{0}}, got {lambda}"
        )));
    }
    let base = lambda.abs().powf(2.0 * z.re);
    let pos = z.re.max(0.0);
    let neg = (-z.re).max(0.0);
    let lower = (2.0 / PI).powf(2.0 * pos) * base * (-PI * z.im.abs()).exp();
    let upper = (PI / 2.0).powf(2.0 * neg) * base * (PI * z.im.abs()).exp();
    Ok((lower, upper))
}

/// `|(1 − e^{−iλ})^z|²` with the principal power.
pub fn envelope_middle(z: C64, lambda: f64) -> f64 {
    (C64::new(1.0, 0.0) - C64::from_polar(1.0, -lambda)).powc(z).norm_sqr()
}

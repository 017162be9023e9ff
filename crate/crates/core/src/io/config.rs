use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{is_normal, min_eigenvalue, HilbertGrid, LinearOperator};
use crate::simulation::{NoiseKind, SimConfig, DEFAULT_K_TRUNC};
use crate::spectral::{ArmaModel, FiarmaModel, CIRCLE_GRID};
use crate::transfer::{check_invertible_on_circle, FracIntegrationSpec, OperatorPolynomial};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathFormat {
    #[default]
    Csv,
    Binary,
}

/// Run parameters; every field has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    #[serde(rename = "T")]
    pub t_len: usize,
    pub burnin: Option<usize>,
    pub k_trunc: usize,
    pub seed: u64,
    pub noise_kind: Option<NoiseKind>,
    pub replications: usize,
    /// Size of the offset frequency grid for densities and autocovariances.
    pub n_freq: usize,
    pub max_lag: usize,
    /// Number of coefficients `0..=K` for coefficient tables.
    #[serde(rename = "K")]
    pub k_coeffs: usize,
    pub eta: f64,
    pub n_quad: usize,
    pub n_refine: usize,
    pub certificate_k: usize,
    pub path_format: PathFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            t_len: 1024,
            burnin: None,
            k_trunc: DEFAULT_K_TRUNC,
            seed: 0,
            noise_kind: None,
            replications: 1,
            n_freq: 4096,
            max_lag: 20,
            k_coeffs: 100,
            eta: 1.0,
            n_quad: 16,
            n_refine: 40,
            certificate_k: 10_000,
            path_format: PathFormat::Csv,
        }
    }
}

impl RunConfig {
    pub fn sim_config(&self, replication: u64) -> SimConfig {
        SimConfig {
            t_len: self.t_len,
            burnin: self.burnin,
            k_trunc: self.k_trunc,
            seed: self.seed,
            noise_kind: self.noise_kind,
            replication,
        }
    }

    fn validate(&self, errs: &mut Vec<String>) {
        if self.t_len == 0 {
            errs.push("run.T must be at least 1".into());
        }
        if self.replications == 0 {
            errs.push("run.replications must be at least 1".into());
        }
        if self.n_freq < 2 {
            errs.push("run.n_freq must be at least 2".into());
        }
        if !(self.eta > 0.0 && self.eta < std::f64::consts::PI) {
            errs.push(format!("run.eta must lie in (0, pi), got {}", self.eta));
        }
        if self.n_quad == 0 {
            errs.push("run.n_quad must be at least 1".into());
        }
        if self.n_refine < 4 {
            errs.push("run.n_refine must be at least 4".into());
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RawEntry {
    Real(f64),
    Complex([f64; 2]),
}

impl From<&RawEntry> for C64 {
    fn from(e: &RawEntry) -> Self {
        match *e {
            RawEntry::Real(x) => C64::new(x, 0.0),
            RawEntry::Complex([re, im]) => C64::new(re, im),
        }
    }
}

type RawMatrix = Vec<Vec<RawEntry>>;

/// A matrix, or a number standing for that multiple of the identity.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RawOperator {
    Scalar(RawEntry),
    Matrix(RawMatrix),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    points: Vec<f64>,
    weights: Vec<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    #[serde(default)]
    phi: Vec<RawOperator>,
    #[serde(default)]
    theta: Vec<RawOperator>,
    #[serde(rename = "Sigma", alias = "sigma")]
    sigma: Option<RawOperator>,
    #[serde(rename = "D")]
    d: Option<RawOperator>,
    #[serde(rename = "N")]
    n: Option<RawOperator>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    grid: Option<RawGrid>,
    #[serde(default)]
    model: RawModel,
    #[serde(default)]
    run: RunConfig,
}

/// Validated configuration. Operators are in orthonormal grid coordinates.
#[derive(Debug, Clone)]
pub struct ModelConfig {
    pub grid: HilbertGrid,
    pub phi: OperatorPolynomial,
    pub theta: OperatorPolynomial,
    pub sigma: LinearOperator,
    pub d: Option<LinearOperator>,
    pub n: Option<LinearOperator>,
    pub run: RunConfig,
}

impl ModelConfig {
    pub fn dim(&self) -> usize {
        self.grid.len()
    }

    pub fn arma(&self) -> Result<ArmaModel> {
        ArmaModel::new(self.phi.clone(), self.theta.clone(), self.sigma.clone())
    }

    pub fn require_d(&self) -> Result<&LinearOperator> {
        self.d
            .as_ref()
            .ok_or_else(|| Error::Config(vec!["model.D is required for this subcommand".into()]))
    }

    pub fn require_n(&self) -> Result<&LinearOperator> {
        self.n
            .as_ref()
            .ok_or_else(|| Error::Config(vec!["model.N is required for this subcommand".into()]))
    }

    /// `D` with its decomposition attached when it is normal.
    pub fn frac_spec(&self) -> Result<FracIntegrationSpec> {
        let d = self.require_d()?.clone();
        if is_normal(&d, 1e-10) {
            FracIntegrationSpec::normal(d, 1e-10)
        } else {
            Ok(FracIntegrationSpec::new(d))
        }
    }

    pub fn fiarma(&self) -> Result<FiarmaModel> {
        FiarmaModel::new(self.arma()?, self.frac_spec()?)
    }
}

/// Parses and validates a JSON configuration, reporting every problem found.
pub fn parse_config(text: &str) -> Result<ModelConfig> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| {
        Error::Config(vec![format!(
            "line {}, column {}: {}",
            e.line(),
            e.column(),
            e
        )])
    })?;
    let mut errs = Vec::new();

    let n = infer_dim(&raw);
    let grid = match (&raw.grid, n) {
        (Some(g), _) => match HilbertGrid::new(g.points.clone(), g.weights.clone()) {
            Ok(g) => Some(g),
            Err(e) => {
                errs.push(format!("grid: {e}"));
                None
            }
        },
        (None, Some(n)) => HilbertGrid::uniform(n).ok(),
        (None, None) => {
            errs.push("cannot infer the dimension: give a grid or model.Sigma".into());
            None
        }
    };
    let n = grid.as_ref().map_or(n.unwrap_or(1), HilbertGrid::len);

    let mut op = |name: &str, raw: Option<&RawOperator>, default: LinearOperator| -> Option<LinearOperator> {
        match raw {
            None => Some(default),
            Some(r) => operator(name, r, n, &mut errs),
        }
    };
    let sigma = op("Sigma", raw.model.sigma.as_ref(), LinearOperator::identity(n));
    let phi: Vec<Option<LinearOperator>> = raw
        .model
        .phi
        .iter()
        .enumerate()
        .map(|(k, r)| op(&format!("phi[{k}]"), Some(r), LinearOperator::zeros(n)))
        .collect();
    let theta: Vec<Option<LinearOperator>> = raw
        .model
        .theta
        .iter()
        .enumerate()
        .map(|(k, r)| op(&format!("theta[{k}]"), Some(r), LinearOperator::zeros(n)))
        .collect();
    let d = raw.model.d.as_ref().and_then(|r| operator("D", r, n, &mut errs));
    let nn = raw.model.n.as_ref().and_then(|r| operator("N", r, n, &mut errs));
    if raw.model.d.is_some() && raw.model.n.is_some() {
        errs.push("model: give at most one of D and N".into());
    }

    if let Some(s) = &sigma {
        if !s.is_hermitian(1e-12 * s.op_norm().max(1.0)) {
            errs.push("Sigma not Hermitian".into());
        } else {
            let min = min_eigenvalue(&s.hermitian_part());
            if min < -1e-10 * s.op_norm() {
                errs.push(format!("Sigma not PSD (min eig {})", round_sig(min)));
            }
        }
    }
    let phi: Option<Vec<LinearOperator>> = phi.into_iter().collect();
    let phi = phi.and_then(|c| OperatorPolynomial::new(n, c).ok());
    if let Some(p) = &phi {
        if let Ok(check) = check_invertible_on_circle(p, CIRCLE_GRID) {
            if !check.invertible {
                errs.push(format!(
                    "phi not invertible on the unit circle (min singular value {:.3e} at lambda = {:.6})",
                    check.min_singular_value, check.argmin_lambda
                ));
            }
        }
    }
    let theta: Option<Vec<LinearOperator>> = theta.into_iter().collect();
    let theta = theta.and_then(|c| OperatorPolynomial::new(n, c).ok());
    raw.run.validate(&mut errs);

    match (errs.is_empty(), grid, phi, theta, sigma) {
        (true, Some(grid), Some(phi), Some(theta), Some(sigma)) => Ok(ModelConfig {
            grid,
            phi,
            theta,
            sigma,
            d,
            n: nn,
            run: raw.run,
        }),
        _ => Err(Error::Config(errs)),
    }
}

/// Rounds to 12 significant digits so reported eigenvalues read cleanly.
fn round_sig(x: f64) -> f64 {
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn infer_dim(raw: &RawConfig) -> Option<usize> {
    if let Some(g) = &raw.grid {
        return Some(g.points.len());
    }
    let m = &raw.model;
    [m.sigma.as_ref(), m.d.as_ref(), m.n.as_ref()]
        .into_iter()
        .chain(m.phi.iter().map(Some))
        .chain(m.theta.iter().map(Some))
        .flatten()
        .find_map(|r| match r {
            RawOperator::Matrix(rows) => Some(rows.len()),
            RawOperator::Scalar(_) => None,
        })
        .or(Some(1))
}

fn operator(name: &str, raw: &RawOperator, n: usize, errs: &mut Vec<String>) -> Option<LinearOperator> {
    match raw {
        RawOperator::Scalar(e) => {
            let c = C64::from(e);
            if !(c.re.is_finite() && c.im.is_finite()) {
                errs.push(format!("{name}: non-finite entry"));
                return None;
            }
            Some(LinearOperator::scalar(n, c))
        }
        RawOperator::Matrix(rows) => {
            let r = rows.len();
            let widths: Vec<usize> = rows.iter().map(Vec::len).collect();
            if widths.iter().any(|&w| w != r) || r != n {
                let c = widths.first().copied().unwrap_or(0);
                let shape = if widths.iter().all(|&w| w == c) {
                    format!("{r}x{c}")
                } else {
                    format!("{r} rows of unequal length")
                };
                errs.push(format!("{name}: dimension mismatch, got {shape} but the grid has {n} points"));
                return None;
            }
            match LinearOperator::from_fn(n, |i, j| C64::from(&rows[i][j])) {
                Ok(op) => Some(op),
                Err(e) => {
                    errs.push(format!("{name}: {e}"));
                    None
                }
            }
        }
    }
}

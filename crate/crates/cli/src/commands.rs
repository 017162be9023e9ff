use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Subcommand;
use serde_json::{json, Value};

use fiarma_core::existence::{check_conditions, check_duker_conditions, existence_integral, Verdict, DEFAULT_SUPPORT_TOL};
use fiarma_core::io::{read_path_file, write_autocov_csv, write_coeffs_csv, write_density_csv, write_path, write_shells_csv, ModelConfig, PathFormat};
use fiarma_core::simulation::{
    averaged_periodogram, simulate_arma, simulate_duker, verify_longmemory_decomposition, FiarmaSimulator, SampledPath,
};
use fiarma_core::spectral::{
    arma_spectral_density, autocov_sequence, fiarma_spectral_density, fourier_frequencies, offset_grid, periodogram,
    SpectralDensityGrid,
};
use fiarma_core::transfer::{duker_decomposition, frac_ma_coeffs};
use fiarma_core::Execution;

use crate::output::OutputDir;

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Simulate paths: power-law if N is given, FIARMA if D is given, ARMA otherwise.
    Simulate,
    /// Spectral density on the offset frequency grid of size run.n_freq.
    Density,
    /// Autocovariances for lags -run.max_lag..=run.max_lag from the spectral density.
    Autocov,
    /// MA(inf) coefficients of (1 - z)^(-D) for k = 0..=run.K.
    FracCoeffs,
    /// Evaluate the existence conditions for the FIARMA model.
    CheckExistence,
    /// Existence integral over |lambda| <= run.eta with dyadic refinement.
    ExistenceIntegral,
    /// Power-law decomposition of (1 - z)^(N - Id) for k = 0..=run.K.
    DukerDecompose,
    /// Pathwise check of the power-law decomposition on shared noise.
    DukerVerify,
    /// Periodogram at Fourier frequencies, of a path file or averaged over simulated replications.
    Periodogram {
        /// Path file (CSV or binary) to analyze instead of simulating.
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Density => "density",
            Command::Autocov => "autocov",
            Command::FracCoeffs => "frac-coeffs",
            Command::CheckExistence => "check-existence",
            Command::ExistenceIntegral => "existence-integral",
            Command::DukerDecompose => "duker-decompose",
            Command::DukerVerify => "duker-verify",
            Command::Periodogram { .. } => "periodogram",
        }
    }
}

pub enum Status {
    Done,
    Refused(String),
}

pub struct RunContext<'a> {
    pub cfg: &'a ModelConfig,
    pub force: bool,
    pub out: &'a mut OutputDir,
}

pub fn run(cmd: &Command, ctx: RunContext) -> Result<Status> {
    match cmd {
        Command::Simulate => simulate(ctx),
        Command::Density => density(ctx),
        Command::Autocov => autocov(ctx),
        Command::FracCoeffs => frac_coeffs(ctx),
        Command::CheckExistence => check_existence(ctx),
        Command::ExistenceIntegral => integral(ctx),
        Command::DukerDecompose => duker_decompose(ctx),
        Command::DukerVerify => duker_verify(ctx),
        Command::Periodogram { input } => periodogram_cmd(ctx, input.as_ref()),
    }
}

fn path_name(stem: &str, r: usize, reps: usize, fmt: PathFormat) -> String {
    let ext = match fmt {
        PathFormat::Csv => "csv",
        PathFormat::Binary => "fiar",
    };
    if reps == 1 {
        format!("{stem}.{ext}")
    } else {
        format!("{stem}_{r:04}.{ext}")
    }
}

fn write_sampled(out: &mut OutputDir, name: &str, p: &SampledPath, fmt: PathFormat) -> Result<()> {
    out.write_with(name, |w| Ok(write_path(p, fmt, w)?))
}

fn simulate(ctx: RunContext) -> Result<Status> {
    let cfg = ctx.cfg;
    let run = &cfg.run;
    let reps = run.replications;
    let fmt = run.path_format;
    let mut meta = json!({ "replications": reps });
    let paths: Vec<SampledPath> = if let Some(n) = &cfg.n {
        meta["model"] = json!("power-law");
        let report = check_duker_conditions(n, &cfg.sigma, &cfg.grid, None).ok();
        meta["conditions"] = serde_json::to_value(&report)?;
        Execution::default().try_map(reps, |r| {
            simulate_duker(n, &cfg.sigma, &cfg.grid, &run.sim_config(r as u64), ctx.force)
        })?
    } else if cfg.d.is_some() {
        meta["model"] = json!("fiarma");
        let m = cfg.fiarma()?;
        let sim = FiarmaSimulator::new(&m, &cfg.grid, &run.sim_config(0), ctx.force)?;
        meta["truncation"] = serde_json::to_value(sim.truncation)?;
        meta["existence"] = serde_json::to_value(&sim.existence)?;
        Execution::default().try_map(reps, |r| sim.path(r as u64))?
    } else {
        meta["model"] = json!("arma");
        let m = cfg.arma()?;
        Execution::default().try_map(reps, |r| simulate_arma(&m, &run.sim_config(r as u64)))?
    };
    let mut files = Vec::new();
    for (r, p) in paths.iter().enumerate() {
        let name = path_name("path", r, reps, fmt);
        write_sampled(ctx.out, &name, p, fmt)?;
        files.push(json!({ "file": name, "meta": p.meta }));
    }
    meta["paths"] = Value::Array(files);
    ctx.out.write_json("simulation.json", &meta)?;
    Ok(Status::Done)
}

fn model_density(cfg: &ModelConfig, freqs: &[f64]) -> Result<SpectralDensityGrid> {
    Ok(if cfg.d.is_some() {
        fiarma_spectral_density(&cfg.fiarma()?, freqs)?
    } else {
        arma_spectral_density(&cfg.arma()?, freqs)?
    })
}

fn density(ctx: RunContext) -> Result<Status> {
    let g = model_density(ctx.cfg, &offset_grid(ctx.cfg.run.n_freq))?;
    ctx.out.write_with("density.csv", |w| Ok(write_density_csv(&g, w)?))?;
    Ok(Status::Done)
}

fn autocov(ctx: RunContext) -> Result<Status> {
    let g = model_density(ctx.cfg, &offset_grid(ctx.cfg.run.n_freq))?;
    let a = autocov_sequence(&g, ctx.cfg.run.max_lag);
    ctx.out.write_with("autocov.csv", |w| Ok(write_autocov_csv(&a, w)?))?;
    Ok(Status::Done)
}

fn frac_coeffs(ctx: RunContext) -> Result<Status> {
    let spec = ctx.cfg.frac_spec()?;
    let c = frac_ma_coeffs(&spec, ctx.cfg.run.k_coeffs);
    ctx.out.write_with("frac_coeffs.csv", |w| Ok(write_coeffs_csv(&c, w)?))?;
    Ok(Status::Done)
}

fn check_existence(ctx: RunContext) -> Result<Status> {
    let m = ctx.cfg.arma()?;
    let spec = ctx.cfg.frac_spec()?;
    let report = check_conditions(&m, &spec, &ctx.cfg.grid, DEFAULT_SUPPORT_TOL)?;
    let mut doc = serde_json::to_value(&report)?;
    doc["failed_condition"] = json!(report.failed_condition());
    ctx.out.write_json("existence.json", &doc)?;
    Ok(match report.verdict {
        Verdict::Holds => Status::Done,
        _ => Status::Refused(report.require_holds().expect_err("verdict does not hold").to_string()),
    })
}

fn integral(ctx: RunContext) -> Result<Status> {
    let run = &ctx.cfg.run;
    let r = existence_integral(&ctx.cfg.arma()?, &ctx.cfg.frac_spec()?, run.eta, run.n_quad, run.n_refine)?;
    ctx.out.write_json("existence_integral.json", &serde_json::to_value(&r)?)?;
    ctx.out.write_with("shells.csv", |w| Ok(write_shells_csv(r.eta, &r.shells, w)?))?;
    Ok(Status::Done)
}

fn duker_decompose(ctx: RunContext) -> Result<Status> {
    let n = ctx.cfg.require_n()?;
    let report = check_duker_conditions(n, &ctx.cfg.sigma, &ctx.cfg.grid, None)?;
    let dec = duker_decomposition(n, ctx.cfg.run.k_coeffs)?;
    let doc = json!({
        "C": dec.c,
        "k0": dec.k0,
        "rho": dec.rho,
        "conditions": report,
    });
    ctx.out.write_json("duker.json", &doc)?;
    ctx.out.write_with("duker_deltas.csv", |w| Ok(write_coeffs_csv(&dec.deltas, w)?))?;
    let norms = dec.delta_norms();
    ctx.out.write_with("duker_delta_norms.csv", |w| {
        writeln!(w, "k,delta_norm")?;
        for (k, x) in norms.iter().enumerate() {
            writeln!(w, "{k},{x:?}")?;
        }
        Ok(())
    })?;
    Ok(Status::Done)
}

fn duker_verify(ctx: RunContext) -> Result<Status> {
    let n = ctx.cfg.require_n()?;
    let run = &ctx.cfg.run;
    let r = verify_longmemory_decomposition(n, &ctx.cfg.sigma, &ctx.cfg.grid, &run.sim_config(0), run.certificate_k)?;
    ctx.out.write_json("longmemory.json", &serde_json::to_value(&r)?)?;
    Ok(Status::Done)
}

fn periodogram_cmd(ctx: RunContext, input: Option<&PathBuf>) -> Result<Status> {
    let cfg = ctx.cfg;
    let g = match input {
        Some(file) => {
            let p = read_path_file(file).with_context(|| format!("reading {}", file.display()))?;
            if p.len() < 2 {
                bail!("periodogram needs at least two time points");
            }
            periodogram(&p, &fourier_frequencies(p.len()))?
        }
        None => {
            let run = &cfg.run;
            let freqs = fourier_frequencies(run.t_len);
            if freqs.is_empty() {
                bail!("periodogram needs run.T >= 2");
            }
            if let Some(n) = &cfg.n {
                averaged_periodogram(run.replications, &freqs, Execution::default(), |r| {
                    simulate_duker(n, &cfg.sigma, &cfg.grid, &run.sim_config(r), ctx.force)
                })?
            } else if cfg.d.is_some() {
                let sim = FiarmaSimulator::new(&cfg.fiarma()?, &cfg.grid, &run.sim_config(0), ctx.force)?;
                averaged_periodogram(run.replications, &freqs, Execution::default(), |r| sim.path(r))?
            } else {
                let m = cfg.arma()?;
                averaged_periodogram(run.replications, &freqs, Execution::default(), |r| {
                    simulate_arma(&m, &run.sim_config(r))
                })?
            }
        }
    };
    ctx.out.write_with("periodogram.csv", |w| Ok(write_density_csv(&g, w)?))?;
    Ok(Status::Done)
}


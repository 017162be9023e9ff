use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use serde_json::json;

mod commands;
mod output;

use commands::{Command, RunContext, Status};
use output::{sha256_hex, OutputDir};

const EXIT_REFUSED: u8 = 2;
const EXIT_ERROR: u8 = 1;

#[derive(Debug, Parser)]
#[command(name = "fiarma-lab", version, about = "Operator FIARMA models: densities, existence checks and simulation")]
struct Cli {
    /// JSON model configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Overrides run.seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Proceed even when an existence condition fails.
    #[arg(long, global = true)]
    force: bool,

    /// Worker threads (0 = all cores).
    #[arg(long, global = true, env = "FIARMA_LAB_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(Status::Done) => ExitCode::SUCCESS,
        Ok(Status::Refused(msg)) => {
            eprintln!("refused: {msg}");
            ExitCode::from(EXIT_REFUSED)
        }
        Err(e) => {
            let refusal = e
                .chain()
                .find_map(|c| c.downcast_ref::<fiarma_core::Error>())
                .is_some_and(fiarma_core::Error::is_refusal);
            if refusal {
                eprintln!("{e:#}");
                ExitCode::from(EXIT_REFUSED)
            } else {
                eprintln!("error: {e:#}");
                ExitCode::from(EXIT_ERROR)
            }
        }
    }
}

fn execute(cli: &Cli) -> Result<Status> {
    if let Some(k) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let text = match &cli.config {
        Some(p) => std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
        None => "{}".to_string(),
    };
    let mut cfg = fiarma_core::io::parse_config(&text)?;
    if let Some(seed) = cli.seed {
        cfg.run.seed = seed;
    }
    let mut out = OutputDir::create(&cli.out)?;
    let result = commands::run(
        &cli.command,
        RunContext {
            cfg: &cfg,
            force: cli.force,
            out: &mut out,
        },
    );
    let (status, message) = match &result {
        Ok(Status::Done) => ("ok", None),
        Ok(Status::Refused(m)) => ("refused", Some(m.clone())),
        Err(e) if e.chain().any(|c| c.downcast_ref::<fiarma_core::Error>().is_some_and(fiarma_core::Error::is_refusal)) => {
            ("refused", Some(format!("{e:#}")))
        }
        Err(_) => return result,
    };
    let manifest = json!({
        "tool": "fiarma-lab",
        "version": env!("CARGO_PKG_VERSION"),
        "core_version": fiarma_core::VERSION,
        "subcommand": cli.command.name(),
        "args": std::env::args().skip(1).collect::<Vec<_>>(),
        "force": cli.force,
        "seed": cfg.run.seed,
        "config_sha256": sha256_hex(text.as_bytes()),
        "config": text,
        "run": cfg.run,
        "status": status,
        "message": message,
        "outputs": out.outputs(),
    });
    out.write_json("manifest.json", &manifest)?;
    result
}

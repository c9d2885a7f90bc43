//! `pem-sim`: command-line front end of the poroelastic transport library.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod error;
mod output;
mod rst;
mod stationary;
mod sweep;
mod symmetry;
mod transient;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::RunConfig;
use error::CliError;

#[derive(Parser)]
#[command(name = "pem-sim", version, about = "Fluid transport in a loaded poroelastic annulus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Stationary profiles for the configured load.
    Stationary,
    /// Steady outer radius from the stationary cubic.
    Rst,
    /// Time-dependent moving-boundary run.
    Transient,
    /// Invariance checks of the residual operators.
    Symmetry,
    /// Rst or transient runs over `sweep_values`.
    Sweep,
}

#[derive(Clone, Copy, ValueEnum)]
enum OnOff {
    On,
    Off,
}

#[derive(Args)]
struct Common {
    /// Config file of `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Inner wall condition: neumann or dirichlet.
    #[arg(long, global = true)]
    case: Option<String>,
    /// circle or annulus.
    #[arg(long, global = true)]
    geometry: Option<String>,
    #[arg(long, global = true, value_enum)]
    quasi_static: Option<OnOff>,
    /// annulus or ring.
    #[arg(long, global = true)]
    traction_form: Option<String>,
    /// Override any config key; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn build_config(c: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &c.config {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        cfg.apply_text(&text, &path.display().to_string())?;
    }
    if let Some(v) = &c.case {
        cfg.set("case", v)?;
    }
    if let Some(v) = &c.geometry {
        cfg.set("geometry", v)?;
    }
    if let Some(v) = c.quasi_static {
        cfg.set("quasi_static", if matches!(v, OnOff::On) { "true" } else { "false" })?;
    }
    if let Some(v) = &c.traction_form {
        cfg.set("traction_form", v)?;
    }
    for kv in &c.set {
        let (k, v) = kv.split_once('=').ok_or_else(|| CliError::Config(format!("--set {kv:?}: expected KEY=VALUE")))?;
        cfg.set(k.trim(), v.trim())?;
    }
    if let Some(o) = &c.out {
        cfg.out = o.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let cfg = build_config(&cli.common)?;
    if matches!(cli.command, Command::Sweep) && cfg.sweep.is_none() {
        return Err(CliError::Config("sweep needs sweep_values".into()));
    }
    let out = output::prepare_dir(&cfg.out)?;
    match cli.command {
        Command::Stationary => stationary::run(&cfg, &out),
        Command::Rst => rst::run(&cfg, &out),
        Command::Transient => transient::run(&cfg, &out),
        Command::Symmetry => symmetry::run(&cfg, &out),
        Command::Sweep => sweep::run(&cfg, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(summary) => {
            print!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("pem-sim: {e}");
            ExitCode::from(e.code() as u8)
        }
    }
}

//! Argument parsing and dispatch.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::commands::{
    self, EsrArgs, FitArgs, LevelsArgs, PopulationsArgs, QubitArgs, SensitivityArgs, SynthArgs,
};
use crate::config::load_run_config;
use crate::error::Result;
use crate::output::{CommandOutput, Format};

#[derive(Debug, Parser)]
#[command(
    name = "donorspin",
    version,
    about = "Hyperfine donor-spin thermodynamics, flux-qubit magnetometry and species decomposition"
)]
pub struct Cli {
    /// Run configuration (JSON); the bundled bismuth config when omitted
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write every table, document and report.json into this directory
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Table format
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Seed for commands that draw random numbers
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy levels versus field: B_mT,level,E_MHz
    Levels(LevelsArgs),
    /// Boltzmann level populations on the temperature grid
    Populations(PopulationsArgs),
    /// Normalized magnetization curves and the kink estimate
    Magnetization,
    /// Flux-qubit transition frequency and responsivity versus flux
    Qubit(QubitArgs),
    /// Fixed-frequency ESR resonance fields with reference markers
    Esr(EsrArgs),
    /// Linear decomposition of flux-shift data into species contributions
    Fit(FitArgs),
    /// Spin and volume sensitivity figures of merit
    Sensitivity(SensitivityArgs),
    /// Seeded synthetic two-species flux-shift data
    Synth(SynthArgs),
}

/// Text destined for the two standard streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Emitted {
    pub stdout: String,
    pub stderr: String,
}

pub fn execute(cli: &Cli) -> Result<(CommandOutput, Format, Option<PathBuf>)> {
    let cfg = load_run_config(cli.config.as_deref())?;
    let format = cli.format.or(cfg.value.format).unwrap_or_default();
    let out = cli.out.clone().or_else(|| cfg.value.output_dir.clone());
    let output = match &cli.command {
        Command::Levels(a) => commands::levels(&cfg, a)?,
        Command::Populations(a) => commands::populations(&cfg, a)?,
        Command::Magnetization => commands::magnetization(&cfg)?,
        Command::Qubit(a) => commands::qubit(&cfg, a)?,
        Command::Esr(a) => commands::esr(&cfg, a)?,
        Command::Fit(a) => commands::fit(&cfg, a)?,
        Command::Sensitivity(a) => commands::sensitivity(&cfg, a)?,
        Command::Synth(a) => commands::synth(&cfg, a, cli.seed)?,
    };
    Ok((output, format, out))
}

/// Runs a parsed command line, writing files when an output directory is set.
pub fn run(cli: &Cli) -> Result<Emitted> {
    let (output, format, out) = execute(cli)?;
    match out {
        Some(dir) => {
            let names = output.write_to(&dir, format)?;
            let stderr = names
                .iter()
                .map(|n| format!("wrote {}\n", dir.join(n).display()))
                .collect();
            Ok(Emitted {
                stdout: output.summary,
                stderr,
            })
        }
        None => {
            let s = output.streams(format);
            Ok(Emitted {
                stdout: s.stdout,
                stderr: s.stderr,
            })
        }
    }
}

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use hvt_core::axioms::{Axiom, TableOptions, EQUALITY_TOL};
use hvt_core::theories::FtMode;
use hvt_core::{Theory, TheoryOptions};

use crate::config::{CheckSpec, Command, OutputFormat, ReproTarget, RunConfig, WitnessName};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "hvt",
    version,
    about = "Hidden-variable dynamics on finite-dimensional systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Sinkhorn convergence tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Entries of U at or below this are structural zeros.
    #[arg(long)]
    pub zero_tol: Option<f64>,
    /// `exact` or `sampled:M`.
    #[arg(long, default_value = "exact")]
    pub ft_mode: String,
    #[arg(long, default_value_t = 2003)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t)]
    pub format: OutputFormat,
    /// Write the output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn theory(s: &str) -> Result<Theory, String> {
    s.parse().map_err(|e: hvt_core::Error| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Stochastic and joint matrices of one theory.
    Map {
        #[arg(long, value_parser = theory)]
        theory: Theory,
        #[arg(long)]
        rho: String,
        #[arg(long)]
        u: String,
        #[command(flatten)]
        common: Common,
    },
    /// Minimal blocks of a unitary.
    Blocks {
        #[arg(long)]
        u: String,
        #[command(flatten)]
        common: Common,
    },
    /// Check an axiom, or the whole table with `--axiom all`.
    Check {
        #[arg(long, default_value = "all")]
        axiom: String,
        #[arg(long, value_parser = theory)]
        theory: Option<Theory>,
        #[arg(long, value_enum)]
        witness: Option<WitnessName>,
        #[arg(long)]
        rho: Option<String>,
        /// Repeat for bipartite (U_A, U_B) and sliced (V, W) instances.
        #[arg(long)]
        u: Vec<String>,
        /// Perturbation size for robustness.
        #[arg(long, default_value_t = 1e-3)]
        delta: f64,
        /// Perturbations for robustness, relabelings for symmetry.
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = EQUALITY_TOL)]
        equality_tol: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Rerun a worked example.
    Repro {
        #[arg(value_enum, default_value_t = ReproTarget::All)]
        target: ReproTarget,
        #[command(flatten)]
        common: Common,
    },
    /// Sample hidden-variable trajectories through a sequence of unitaries.
    Sample {
        #[arg(long, value_parser = theory)]
        theory: Theory,
        #[arg(long)]
        rho: String,
        /// One per time step, applied in order.
        #[arg(long, required = true)]
        u: Vec<String>,
        #[arg(long, default_value_t = 10_000)]
        trajectories: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Replay the config embedded in a structured output file.
    Rerun {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Structured)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub enum Invocation {
    Run {
        config: RunConfig,
        format: OutputFormat,
        out: Option<PathBuf>,
    },
    Rerun {
        file: PathBuf,
        format: OutputFormat,
        out: Option<PathBuf>,
    },
}

pub fn parse_ft_mode(text: &str, seed: u64) -> Result<FtMode, CliError> {
    match text.split_once(':') {
        None if text == "exact" => Ok(FtMode::Exact),
        Some(("sampled", m)) => m
            .parse::<usize>()
            .ok()
            .filter(|&m| m > 0)
            .map(|m| FtMode::sampled(m, seed))
            .ok_or_else(|| CliError::Usage(format!("bad sample count in '{text}'"))),
        _ => Err(CliError::Usage(format!(
            "--ft-mode must be 'exact' or 'sampled:M', got '{text}'"
        ))),
    }
}

fn options(base: TheoryOptions, c: &Common) -> Result<TheoryOptions, CliError> {
    Ok(TheoryOptions {
        st_tol: c.tol.unwrap_or(base.st_tol),
        st_max_iter: c.max_iter.unwrap_or(base.st_max_iter),
        zero_tol: c.zero_tol.unwrap_or(base.zero_tol),
        ft_mode: parse_ft_mode(&c.ft_mode, c.seed)?,
        ..base
    })
}

impl Cli {
    pub fn invocation(self) -> Result<Invocation, CliError> {
        let table_base = || TableOptions::default().theory;
        let (command, base, common) = match self.command {
            Cmd::Rerun { file, format, out } => return Ok(Invocation::Rerun { file, format, out }),
            Cmd::Map {
                theory,
                rho,
                u,
                common,
            } => (
                Command::Map { theory, rho, u },
                TheoryOptions::default(),
                common,
            ),
            Cmd::Blocks { u, common } => (Command::Blocks { u }, TheoryOptions::default(), common),
            Cmd::Check {
                axiom,
                theory,
                witness,
                rho,
                u,
                delta,
                trials,
                equality_tol,
                common,
            } => {
                let axiom = if axiom.eq_ignore_ascii_case("all") {
                    None
                } else {
                    Some(axiom.parse::<Axiom>()?)
                };
                let base = if axiom.is_none() {
                    table_base()
                } else {
                    TheoryOptions::default()
                };
                let spec = CheckSpec {
                    axiom,
                    theory,
                    witness,
                    rho,
                    u,
                    delta,
                    trials,
                    tol: equality_tol,
                };
                (Command::Check(spec), base, common)
            }
            Cmd::Repro { target, common } => (Command::Repro { target }, table_base(), common),
            Cmd::Sample {
                theory,
                rho,
                u,
                trajectories,
                common,
            } => (
                Command::Sample {
                    theory,
                    rho,
                    u,
                    trajectories,
                },
                TheoryOptions::default(),
                common,
            ),
        };
        Ok(Invocation::Run {
            config: RunConfig {
                command,
                options: options(base, &common)?,
                seed: common.seed,
            },
            format: common.format,
            out: common.out,
        })
    }
}

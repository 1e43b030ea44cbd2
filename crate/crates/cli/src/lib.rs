//! Command-line front end: argument parsing, named inputs, run configs that
//! round-trip through structured output, and trajectory sampling.

pub mod args;
pub mod check;
pub mod config;
pub mod error;
pub mod mnemonic;
pub mod run;
pub mod sample;

pub use config::{CheckSpec, Command, OutputFormat, ReproTarget, RunConfig, WitnessName};
pub use error::CliError;
pub use run::{config_from_document, run, Outcome};
pub use sample::{sample_trajectories, SampleReport};

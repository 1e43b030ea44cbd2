//! Everything needed to reproduce a run. It is embedded in structured output
//! so `hvt rerun` can replay it.

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use hvt_core::axioms::Axiom;
use hvt_core::{Theory, TheoryOptions};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub options: TheoryOptions,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Command {
    Map {
        theory: Theory,
        rho: String,
        u: String,
    },
    Blocks {
        u: String,
    },
    Check(CheckSpec),
    Repro {
        target: ReproTarget,
    },
    Sample {
        theory: Theory,
        rho: String,
        u: Vec<String>,
        trajectories: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSpec {
    /// `None` runs the whole table.
    pub axiom: Option<Axiom>,
    /// `None` checks all four theories.
    pub theory: Option<Theory>,
    pub witness: Option<WitnessName>,
    pub rho: Option<String>,
    pub u: Vec<String>,
    pub delta: f64,
    pub trials: usize,
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessName {
    /// `I/4` with a rotation on the first qubit only.
    Tensor,
    /// The three-level state and unitary with a block that jumps.
    StrongContinuity,
    /// `I/2` and the identity.
    Identity,
    /// Bell state with `R(pi/8)` and `R(-pi/8)` on the two qubits.
    Bell,
    /// Product state `phi(pi/4) x phi(-pi/8)` with `R(pi/4)` on both sides.
    Product,
    /// `I/2` as an even mixture of `phi(pi/8)` and `phi(5pi/8)`, under `R(pi/8)`
    /// unless a `--u` is given.
    PhiPair,
    /// `|+>` with `R(pi/4)` then `R(-pi/4)`.
    Slicing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ReproTarget {
    Nogo,
    Decomp,
    StrongContinuity,
    Table,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Structured,
}

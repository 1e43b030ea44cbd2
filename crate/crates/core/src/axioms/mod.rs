//! Executable checks of the axioms a hidden-variable theory may satisfy,
//! plus reproductions of the impossibility arguments.
//!
//! Equality axioms hold on a suite when every deviation is at most
//! [`EQUALITY_TOL`] and are violated when some deviation exceeds
//! [`VIOLATION_THRESHOLD`]; anything in between is reported as inconclusive.

mod checks;
pub mod instances;
mod repro;
mod table;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use checks::{
    check_block_robustness, check_commutativity, check_decomposition_invariance,
    check_indifference, check_marginalization, check_product_commutativity, check_symmetry,
    check_time_slicing, probe_robustness, robustness_bound,
};
pub use repro::{
    repro_decomp, repro_nogo, repro_strong_continuity, DecompReport, ForcedRow, NogoReport,
    NogoRow, PairRow, StrongContinuityReport, StrongContinuityRow,
};
pub use table::{axiom_table, AxiomTable, Expected, TableCell, TableOptions, EXPECTED_TABLE};

use crate::error::Result;
use crate::qcore::{DensityMatrix, RealMatrix, UnitaryMatrix};
use crate::theories::{apply_theory, Theory, TheoryOptions};

pub const EQUALITY_TOL: f64 = 1e-7;
pub const VIOLATION_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Marginalization,
    Symmetry,
    Indifference,
    Robustness,
    BlockRobustness,
    Commutativity,
    ProductCommutativity,
    DecompositionInvariance,
    TimeSlicing,
}

impl Axiom {
    /// The seven axioms of the comparison table, in table order.
    pub const TABLE: [Axiom; 7] = [
        Axiom::Symmetry,
        Axiom::Indifference,
        Axiom::Robustness,
        Axiom::BlockRobustness,
        Axiom::Commutativity,
        Axiom::ProductCommutativity,
        Axiom::DecompositionInvariance,
    ];

    pub fn title(self) -> &'static str {
        match self {
            Axiom::Marginalization => "Marginalization",
            Axiom::Symmetry => "Symmetry",
            Axiom::Indifference => "Indifference",
            Axiom::Robustness => "Robustness",
            Axiom::BlockRobustness => "Block Robustness",
            Axiom::Commutativity => "Commutativity",
            Axiom::ProductCommutativity => "Product Commutativity",
            Axiom::DecompositionInvariance => "Decomposition Invariance",
            Axiom::TimeSlicing => "Time Slicing",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.title())
    }
}

impl std::str::FromStr for Axiom {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        Ok(match key.as_str() {
            "marginalization" => Axiom::Marginalization,
            "symmetry" => Axiom::Symmetry,
            "indifference" => Axiom::Indifference,
            "robustness" => Axiom::Robustness,
            "blockrobustness" => Axiom::BlockRobustness,
            "commutativity" => Axiom::Commutativity,
            "productcommutativity" => Axiom::ProductCommutativity,
            "decompositioninvariance" => Axiom::DecompositionInvariance,
            "timeslicing" => Axiom::TimeSlicing,
            _ => {
                return Err(crate::Error::InvalidParameter(format!(
                    "unknown axiom '{s}'"
                )))
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    HoldsOnSuite,
    Violated,
    ProbeOnly,
    /// Deviation above the equality tolerance but below the violation
    /// threshold.
    Inconclusive,
}

impl Verdict {
    pub fn symbol(self) -> &'static str {
        match self {
            Verdict::HoldsOnSuite => "Yes",
            Verdict::Violated => "No",
            Verdict::ProbeOnly => "?",
            Verdict::Inconclusive => "??",
        }
    }

    pub fn from_equality(deviation: f64, tol: f64) -> Self {
        if deviation <= tol {
            Verdict::HoldsOnSuite
        } else if deviation > VIOLATION_THRESHOLD.max(tol) {
            Verdict::Violated
        } else {
            Verdict::Inconclusive
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Inputs needed to recompute one deviation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Instance {
    Single {
        rho: DensityMatrix,
        u: UnitaryMatrix,
    },
    Relabeled {
        rho: DensityMatrix,
        u: UnitaryMatrix,
        perm: Vec<usize>,
    },
    Perturbed {
        rho: DensityMatrix,
        u: UnitaryMatrix,
        rho_tilde: DensityMatrix,
        u_tilde: UnitaryMatrix,
    },
    Bipartite {
        rho: DensityMatrix,
        u_a: UnitaryMatrix,
        u_b: UnitaryMatrix,
        dims: (usize, usize),
    },
    Decomposition {
        parts: Vec<(f64, DensityMatrix)>,
        u: UnitaryMatrix,
    },
    Sliced {
        rho: DensityMatrix,
        v: UnitaryMatrix,
        w: UnitaryMatrix,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub instance: Instance,
    pub deviation: f64,
}

impl Witness {
    /// Recomputes the deviation of this witness for `axiom` under `theory`.
    pub fn recheck(&self, axiom: Axiom, theory: Theory, opts: &TheoryOptions) -> Result<f64> {
        checks::deviation(axiom, theory, &self.instance, opts)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub theory: Theory,
    pub verdict: Verdict,
    /// The instance with the largest deviation.
    pub witnesses: Vec<Witness>,
    pub max_deviation: f64,
    /// Equality tolerance, or the deviation bound for robustness checks.
    pub tolerance: f64,
    pub trials: usize,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub measurements: BTreeMap<String, f64>,
}

impl AxiomReport {
    pub(crate) fn from_equality(
        axiom: Axiom,
        theory: Theory,
        tol: f64,
        samples: Vec<Witness>,
    ) -> Self {
        let trials = samples.len();
        let worst = worst_of(samples);
        let max_deviation = worst.as_ref().map_or(0.0, |w| w.deviation);
        Self {
            axiom,
            theory,
            verdict: Verdict::from_equality(max_deviation, tol),
            witnesses: worst.into_iter().collect(),
            max_deviation,
            tolerance: tol,
            trials,
            measurements: BTreeMap::new(),
        }
    }

    /// Combines reports of the same axiom and theory over several instances.
    pub fn merge(reports: Vec<AxiomReport>) -> Option<AxiomReport> {
        let first = reports.first()?.clone();
        let verdicts: Vec<Verdict> = reports.iter().map(|r| r.verdict).collect();
        let verdict = if verdicts.contains(&Verdict::Violated) {
            Verdict::Violated
        } else if verdicts.iter().all(|&v| v == Verdict::HoldsOnSuite) {
            Verdict::HoldsOnSuite
        } else if verdicts.iter().all(|&v| v == Verdict::ProbeOnly) {
            Verdict::ProbeOnly
        } else {
            Verdict::Inconclusive
        };
        // Keep the witness that decided the verdict: the worst violating one
        // if any, otherwise the worst overall.
        let decisive = reports
            .iter()
            .filter(|r| verdict != Verdict::Violated || r.verdict == Verdict::Violated)
            .max_by(|a, b| a.max_deviation.total_cmp(&b.max_deviation))
            .expect("nonempty");
        let mut measurements = BTreeMap::new();
        for r in &reports {
            measurements.extend(r.measurements.clone());
        }
        Some(AxiomReport {
            axiom: first.axiom,
            theory: first.theory,
            verdict,
            witnesses: decisive.witnesses.clone(),
            max_deviation: reports.iter().map(|r| r.max_deviation).fold(0.0, f64::max),
            tolerance: decisive.tolerance,
            trials: reports.iter().map(|r| r.trials).sum(),
            measurements,
        })
    }
}

fn worst_of(samples: Vec<Witness>) -> Option<Witness> {
    samples
        .into_iter()
        .reduce(|a, b| if b.deviation > a.deviation { b } else { a })
}

pub(crate) fn stochastic_of(
    theory: Theory,
    rho: &DensityMatrix,
    u: &UnitaryMatrix,
    opts: &TheoryOptions,
) -> Result<RealMatrix> {
    Ok(apply_theory(theory, rho, u, opts)?.stochastic)
}

pub(crate) fn joint_of(
    theory: Theory,
    rho: &DensityMatrix,
    u: &UnitaryMatrix,
    opts: &TheoryOptions,
) -> Result<RealMatrix> {
    Ok(apply_theory(theory, rho, u, opts)?.joint.into_matrix())
}

/// Seed of the `k`-th derived stream of `seed`.
pub(crate) fn derive_seed(seed: u64, k: u64) -> u64 {
    let mut z = seed ^ k.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_bands() {
        assert_eq!(
            Verdict::from_equality(1e-9, EQUALITY_TOL),
            Verdict::HoldsOnSuite
        );
        assert_eq!(
            Verdict::from_equality(1e-5, EQUALITY_TOL),
            Verdict::Inconclusive
        );
        assert_eq!(Verdict::from_equality(0.2, EQUALITY_TOL), Verdict::Violated);
    }

    #[test]
    fn axiom_names_parse() {
        for a in Axiom::TABLE {
            assert_eq!(a.title().parse::<Axiom>().unwrap(), a);
        }
        assert_eq!(
            "block-robustness".parse::<Axiom>().unwrap(),
            Axiom::BlockRobustness
        );
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
        assert_ne!(derive_seed(1, 0), derive_seed(2, 0));
    }
}

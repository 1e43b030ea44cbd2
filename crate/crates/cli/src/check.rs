//! Single-axiom checks on named witnesses or user inputs.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use hvt_core::axioms::instances::{
    bell, phi_pair_decomposition, product_commutativity_witness, strong_continuity_state,
    strong_continuity_unitary, tensor_witness, time_slicing_witness,
};
use hvt_core::axioms::{
    check_block_robustness, check_commutativity, check_decomposition_invariance,
    check_indifference, check_marginalization, check_product_commutativity, check_symmetry,
    check_time_slicing, probe_robustness, Axiom, AxiomReport, Expected, Verdict, EXPECTED_TABLE,
};
use hvt_core::qcore::{rotation, Complex64};
use hvt_core::{ComplexMatrix, DensityMatrix, Theory, TheoryOptions, UnitaryMatrix};

use crate::config::{CheckSpec, WitnessName};
use crate::error::CliError;
use crate::mnemonic;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub report: AxiomReport,
    pub expected: Option<Expected>,
    pub mismatch: bool,
}

enum Input {
    Single(DensityMatrix, UnitaryMatrix),
    Bipartite(DensityMatrix, UnitaryMatrix, UnitaryMatrix),
    Product([Complex64; 2], [Complex64; 2], UnitaryMatrix, UnitaryMatrix),
    Decomposition(Vec<(f64, DensityMatrix)>, UnitaryMatrix),
    Sliced(DensityMatrix, UnitaryMatrix, UnitaryMatrix),
}

pub fn default_witness(axiom: Axiom) -> WitnessName {
    match axiom {
        Axiom::Marginalization | Axiom::Symmetry | Axiom::BlockRobustness => {
            WitnessName::StrongContinuity
        }
        Axiom::Indifference => WitnessName::Tensor,
        Axiom::Robustness => WitnessName::Identity,
        Axiom::Commutativity => WitnessName::Bell,
        Axiom::ProductCommutativity => WitnessName::Product,
        Axiom::DecompositionInvariance => WitnessName::PhiPair,
        Axiom::TimeSlicing => WitnessName::Slicing,
    }
}

/// Witnesses that refute the axiom for every theory marked `No` for it.
fn is_counterexample(axiom: Axiom, witness: WitnessName) -> bool {
    use WitnessName::*;
    matches!(
        (axiom, witness),
        (Axiom::Indifference, Tensor)
            | (Axiom::Robustness, Identity | StrongContinuity)
            | (Axiom::BlockRobustness, StrongContinuity)
            | (Axiom::Commutativity, Bell)
            | (Axiom::ProductCommutativity, Product)
            | (Axiom::DecompositionInvariance, PhiPair)
    )
}

pub fn expected(axiom: Axiom, theory: Theory) -> Option<Expected> {
    let row = Axiom::TABLE.iter().position(|&a| a == axiom)?;
    let col = Theory::ALL.iter().position(|&t| t == theory)?;
    Some(EXPECTED_TABLE[row][col])
}

fn named_input(axiom: Axiom, witness: WitnessName, u: &[UnitaryMatrix]) -> Result<Input, CliError> {
    let single = |(rho, u)| {
        match axiom {
        Axiom::Marginalization
        | Axiom::Symmetry
        | Axiom::Indifference
        | Axiom::Robustness
        | Axiom::BlockRobustness => Ok(Input::Single(rho, u)),
        _ => Err(CliError::Usage(format!(
            "witness '{witness:?}' is a single state and unitary; {axiom} needs a different kind of instance"
        ))),
    }
    };
    let only = |kind: Axiom, input: Input| {
        if axiom == kind {
            Ok(input)
        } else {
            Err(CliError::Usage(format!(
                "witness '{witness:?}' does not apply to {axiom}"
            )))
        }
    };
    match witness {
        WitnessName::Tensor => single(tensor_witness()),
        WitnessName::StrongContinuity => single((
            strong_continuity_state(0.1, 1.0),
            strong_continuity_unitary(),
        )),
        WitnessName::Identity => single((
            DensityMatrix::maximally_mixed(2),
            UnitaryMatrix::identity(2),
        )),
        WitnessName::Bell => only(
            Axiom::Commutativity,
            Input::Bipartite(bell(), rotation(PI / 8.0), rotation(-PI / 8.0)),
        ),
        WitnessName::Product => {
            let (a, b, ua, ub) = product_commutativity_witness();
            only(Axiom::ProductCommutativity, Input::Product(a, b, ua, ub))
        }
        WitnessName::PhiPair => {
            let rot = match u {
                [] => rotation(PI / 8.0),
                [r] => r.clone(),
                _ => return Err(CliError::Usage("phi-pair takes at most one --u".into())),
            };
            only(
                Axiom::DecompositionInvariance,
                Input::Decomposition(phi_pair_decomposition(), rot),
            )
        }
        WitnessName::Slicing => {
            let (rho, v, w) = time_slicing_witness();
            only(Axiom::TimeSlicing, Input::Sliced(rho, v, w))
        }
    }
}

/// `tr_B` and `tr_A` of a state on `C^da x C^db`.
fn reduced(rho: &ComplexMatrix, da: usize, db: usize) -> (ComplexMatrix, ComplexMatrix) {
    let a = ComplexMatrix::from_fn(da, |i, j| {
        (0..db).map(|k| rho.get(i * db + k, j * db + k)).sum()
    });
    let b = ComplexMatrix::from_fn(db, |i, j| {
        (0..da).map(|k| rho.get(k * db + i, k * db + j)).sum()
    });
    (a, b)
}

fn user_input(axiom: Axiom, rho: DensityMatrix, u: Vec<UnitaryMatrix>) -> Result<Input, CliError> {
    let n = rho.dim();
    let given = u.len();
    let want = |k: usize, what: &str| {
        CliError::Usage(format!("{axiom} takes {k} --u ({what}), got {given}"))
    };
    match axiom {
        Axiom::Commutativity | Axiom::ProductCommutativity => {
            let [ua, ub]: [UnitaryMatrix; 2] = u
                .try_into()
                .map_err(|_| CliError::Usage(format!("{axiom} takes --u U_A --u U_B")))?;
            if ua.dim() * ub.dim() != n {
                return Err(CliError::Usage(format!(
                    "subsystem dimensions {} x {} do not match the state dimension {n}",
                    ua.dim(),
                    ub.dim()
                )));
            }
            if axiom == Axiom::ProductCommutativity {
                let (a, b) = reduced(rho.matrix(), ua.dim(), ub.dim());
                let gap = a.kron(&b).max_abs_diff(rho.matrix());
                if gap > 1e-9 || rho.purity_defect() > 1e-9 {
                    return Err(CliError::Usage(
                        "product commutativity needs a pure product state".into(),
                    ));
                }
            }
            Ok(Input::Bipartite(rho, ua, ub))
        }
        Axiom::TimeSlicing => {
            let [v, w]: [UnitaryMatrix; 2] = u.try_into().map_err(|_| want(2, "V then W"))?;
            Ok(Input::Sliced(rho, v, w))
        }
        Axiom::DecompositionInvariance => Err(CliError::Usage(
            "decomposition invariance takes --witness phi-pair".into(),
        )),
        _ => {
            let [u]: [UnitaryMatrix; 1] = u.try_into().map_err(|_| want(1, "the unitary"))?;
            Ok(Input::Single(rho, u))
        }
    }
}

fn run_one(
    axiom: Axiom,
    theory: Theory,
    input: &Input,
    spec: &CheckSpec,
    seed: u64,
    opts: &TheoryOptions,
) -> Result<AxiomReport, CliError> {
    let tol = spec.tol;
    let report = match (axiom, input) {
        (Axiom::Marginalization, Input::Single(rho, u)) => {
            check_marginalization(theory, rho, u, tol, opts)?
        }
        (Axiom::Symmetry, Input::Single(rho, u)) => {
            check_symmetry(theory, rho, u, spec.trials, seed, tol, opts)?
        }
        (Axiom::Indifference, Input::Single(rho, u)) => {
            check_indifference(theory, rho, u, tol, opts)?
        }
        (Axiom::Robustness, Input::Single(rho, u)) => {
            probe_robustness(theory, rho, u, spec.delta, spec.trials, seed, opts)?
        }
        (Axiom::BlockRobustness, Input::Single(rho, u)) => {
            check_block_robustness(theory, rho, u, spec.delta, spec.trials, seed, opts)?
        }
        (Axiom::Commutativity | Axiom::ProductCommutativity, Input::Bipartite(rho, ua, ub)) => {
            let mut r = check_commutativity(theory, rho, ua, ub, (ua.dim(), ub.dim()), tol, opts)?;
            r.axiom = axiom;
            r
        }
        (Axiom::ProductCommutativity, Input::Product(a, b, ua, ub)) => {
            check_product_commutativity(theory, a, b, ua, ub, tol, opts)?
        }
        (Axiom::DecompositionInvariance, Input::Decomposition(parts, u)) => {
            let rho = DensityMatrix::mixture(parts)?;
            check_decomposition_invariance(theory, &rho, parts, u, tol, opts)?
        }
        (Axiom::TimeSlicing, Input::Sliced(rho, v, w)) => {
            check_time_slicing(theory, rho, v, w, tol, opts)?
        }
        _ => return Err(CliError::Usage(format!("instance does not fit {axiom}"))),
    };
    Ok(report)
}

/// Checks one axiom for the requested theories. A row is a mismatch when the
/// axiom is violated where it should hold, or when a known counterexample
/// fails to violate it where it should fail.
pub fn check_axiom(
    axiom: Axiom,
    spec: &CheckSpec,
    seed: u64,
    opts: &TheoryOptions,
) -> Result<Vec<CheckRow>, CliError> {
    let us = spec
        .u
        .iter()
        .map(|s| mnemonic::unitary(s))
        .collect::<Result<Vec<_>, _>>()?;
    let (input, witness) = match (&spec.rho, spec.witness) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "give either --witness or --rho, not both".into(),
            ))
        }
        (Some(rho), None) => (user_input(axiom, mnemonic::state(rho)?, us)?, None),
        (None, w) => {
            let w = w.unwrap_or_else(|| default_witness(axiom));
            if !us.is_empty() && w != WitnessName::PhiPair {
                return Err(CliError::Usage(
                    "named witnesses bring their own unitaries".into(),
                ));
            }
            (named_input(axiom, w, &us)?, Some(w))
        }
    };
    let theories = spec
        .theory
        .map_or_else(|| Theory::ALL.to_vec(), |t| vec![t]);
    theories
        .into_iter()
        .map(|theory| {
            let report = run_one(axiom, theory, &input, spec, seed, opts)?;
            let expected = expected(axiom, theory);
            let mismatch = match expected {
                Some(Expected::Yes) => report.verdict == Verdict::Violated,
                Some(Expected::No) => {
                    witness.is_some_and(|w| is_counterexample(axiom, w))
                        && report.verdict == Verdict::HoldsOnSuite
                }
                _ => false,
            };
            Ok(CheckRow {
                report,
                expected,
                mismatch,
            })
        })
        .collect()
}

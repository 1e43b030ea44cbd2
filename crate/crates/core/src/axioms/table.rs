use std::f64::consts::PI;
use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::qcore::{
    haar_state, random_block_unitary, random_density, random_unitary, rng, rotation, DensityMatrix,
    UnitaryMatrix,
};
use crate::theories::{Theory, TheoryOptions};

use super::instances::*;
use super::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Expected {
    Yes,
    No,
    Open,
}

impl Expected {
    pub fn symbol(self) -> &'static str {
        match self {
            Expected::Yes => "Yes",
            Expected::No => "No",
            Expected::Open => "?",
        }
    }

    pub fn agrees(self, verdict: Verdict) -> bool {
        matches!(
            (self, verdict),
            (Expected::Yes, Verdict::HoldsOnSuite)
                | (Expected::No, Verdict::Violated)
                | (Expected::Open, Verdict::ProbeOnly)
        )
    }
}

/// Expected verdicts, rows in [`Axiom::TABLE`] order and columns in
/// [`Theory::ALL`] order.
pub const EXPECTED_TABLE: [[Expected; 4]; 7] = {
    use Expected::*;
    [
        [Yes, Yes, Yes, Yes],
        [No, Yes, Yes, Yes],
        [Yes, No, Yes, Open],
        [Yes, Yes, Yes, Open],
        [Yes, No, No, No],
        [Yes, Yes, No, Yes],
        [Yes, Yes, No, No],
    ]
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableOptions {
    pub theory: TheoryOptions,
    /// Random instances per equality cell.
    pub suite_size: usize,
    /// Random instances per robustness cell, each perturbed `trials` times.
    pub robustness_instances: usize,
    pub trials: usize,
    pub delta: f64,
    pub tol: f64,
    pub seed: u64,
}

impl Default for TableOptions {
    fn default() -> Self {
        Self {
            // Symmetry is compared entrywise on S, whose scaling error is the
            // marginal residual divided by the smallest population.
            theory: TheoryOptions {
                st_tol: 1e-12,
                ..TheoryOptions::default()
            },
            suite_size: 50,
            robustness_instances: 10,
            trials: 5,
            delta: 1e-3,
            tol: EQUALITY_TOL,
            seed: 2003,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableCell {
    pub axiom: Axiom,
    pub theory: Theory,
    pub expected: Expected,
    pub report: AxiomReport,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomTable {
    pub options: TableOptions,
    pub cells: Vec<TableCell>,
}

impl AxiomTable {
    pub fn all_match(&self) -> bool {
        self.cells.iter().all(|c| c.matches)
    }

    pub fn mismatches(&self) -> Vec<&TableCell> {
        self.cells.iter().filter(|c| !c.matches).collect()
    }

    pub fn cell(&self, axiom: Axiom, theory: Theory) -> Option<&TableCell> {
        self.cells
            .iter()
            .find(|c| c.axiom == axiom && c.theory == theory)
    }
}

impl fmt::Display for AxiomTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<26}", "")?;
        for t in Theory::ALL {
            write!(
                f,
                "{:>18}",
                format!("{} ({})", t.short_name(), t.long_name())
            )?;
        }
        writeln!(f)?;
        for axiom in Axiom::TABLE {
            write!(f, "{:<26}", axiom.title())?;
            for theory in Theory::ALL {
                let text = match self.cell(axiom, theory) {
                    Some(c) if c.matches => c.report.verdict.symbol().to_string(),
                    Some(c) => format!(
                        "{} [want {}]",
                        c.report.verdict.symbol(),
                        c.expected.symbol()
                    ),
                    None => "-".into(),
                };
                write!(f, "{text:>18}")?;
            }
            writeln!(f)?;
        }
        writeln!(f)?;
        writeln!(f, "max deviation / tolerance or bound / trials")?;
        for c in &self.cells {
            writeln!(
                f,
                "  {:<26} {}  {:>10.3e} / {:>9.3e} / {:>4}  {}",
                c.axiom.title(),
                c.theory.short_name(),
                c.report.max_deviation,
                c.report.tolerance,
                c.report.trials,
                if c.matches { "ok" } else { "MISMATCH" }
            )?;
        }
        Ok(())
    }
}

type Pair = (DensityMatrix, UnitaryMatrix);

fn generic_pairs(count: usize, seed: u64) -> Result<Vec<Pair>> {
    (0..count)
        .map(|k| {
            let n = 2 + k % 3;
            let rank = 1 + (k / 3) % n;
            let rho = random_density(n, derive_seed(seed, 2 * k as u64), rank)?;
            Ok((rho, random_unitary(n, derive_seed(seed, 2 * k as u64 + 1))))
        })
        .collect()
}

fn block_pairs(count: usize, seed: u64) -> Result<Vec<Pair>> {
    (0..count)
        .map(|k| {
            let n = 2 + k % 3;
            let sizes: Vec<usize> = match (n, k % 2) {
                (2, _) => vec![1, 1],
                (3, _) => vec![1, 2],
                (_, 0) => vec![2, 2],
                _ => vec![1, 3],
            };
            let rank = 1 + (k / 3) % n;
            let rho = random_density(n, derive_seed(seed, 2 * k as u64), rank)?;
            let (u, _) =
                random_block_unitary(&sizes, &mut rng(derive_seed(seed, 2 * k as u64 + 1)));
            Ok((rho, u))
        })
        .collect()
}

fn three_level() -> Pair {
    (
        strong_continuity_state(0.1, 1.0),
        strong_continuity_unitary(),
    )
}

fn merged(reports: Vec<AxiomReport>) -> AxiomReport {
    AxiomReport::merge(reports).expect("suites are nonempty")
}

fn run_cell(axiom: Axiom, theory: Theory, o: &TableOptions) -> Result<AxiomReport> {
    let opts = &o.theory;
    let tol = o.tol;
    let seed = derive_seed(o.seed, axiom as u64);
    let reports = match axiom {
        Axiom::Symmetry => {
            let mut suite = generic_pairs(o.suite_size / 2, seed)?;
            suite.extend(block_pairs(o.suite_size - o.suite_size / 2, seed ^ 1)?);
            suite
                .iter()
                .enumerate()
                .map(|(k, (rho, u))| {
                    check_symmetry(
                        theory,
                        rho,
                        u,
                        1,
                        derive_seed(seed, k as u64 + 1000),
                        tol,
                        opts,
                    )
                })
                .collect::<Result<Vec<_>>>()?
        }
        Axiom::Indifference => {
            let mut suite = vec![tensor_witness(), three_level()];
            suite.extend(block_pairs(o.suite_size, seed)?);
            suite
                .iter()
                .map(|(rho, u)| check_indifference(theory, rho, u, tol, opts))
                .collect::<Result<Vec<_>>>()?
        }
        Axiom::Robustness => {
            let mut suite = vec![
                (
                    DensityMatrix::maximally_mixed(2),
                    UnitaryMatrix::identity(2),
                ),
                three_level(),
            ];
            suite.extend(generic_pairs(o.robustness_instances, seed)?);
            suite
                .iter()
                .enumerate()
                .map(|(k, (rho, u))| {
                    probe_robustness(
                        theory,
                        rho,
                        u,
                        o.delta,
                        o.trials,
                        derive_seed(seed, k as u64 + 1000),
                        opts,
                    )
                })
                .collect::<Result<Vec<_>>>()?
        }
        Axiom::BlockRobustness => {
            let mut suite = vec![three_level()];
            suite.extend(block_pairs(o.robustness_instances, seed)?);
            suite
                .iter()
                .enumerate()
                .map(|(k, (rho, u))| {
                    check_block_robustness(
                        theory,
                        rho,
                        u,
                        o.delta,
                        o.trials,
                        derive_seed(seed, k as u64 + 1000),
                        opts,
                    )
                })
                .collect::<Result<Vec<_>>>()?
        }
        Axiom::Commutativity => {
            let mut out = vec![check_commutativity(
                theory,
                &bell(),
                &rotation(PI / 8.0),
                &rotation(-PI / 8.0),
                (2, 2),
                tol,
                opts,
            )?];
            for k in 0..o.suite_size / 2 {
                let s = derive_seed(seed, k as u64);
                let rho = random_density(4, s, 1 + k % 4)?;
                let ua = random_unitary(2, derive_seed(s, 1));
                let ub = random_unitary(2, derive_seed(s, 2));
                out.push(check_commutativity(
                    theory,
                    &rho,
                    &ua,
                    &ub,
                    (2, 2),
                    tol,
                    opts,
                )?);
            }
            out
        }
        Axiom::ProductCommutativity => {
            let (a, b, ua, ub) = product_commutativity_witness();
            let mut out = vec![check_product_commutativity(
                theory, &a, &b, &ua, &ub, tol, opts,
            )?];
            for k in 0..o.suite_size / 2 {
                let s = derive_seed(seed, k as u64);
                let db = 2 + k % 2;
                let mut g = rng(s);
                let a = haar_state(2, &mut g);
                let b = haar_state(db, &mut g);
                let ua = random_unitary(2, derive_seed(s, 1));
                let ub = random_unitary(db, derive_seed(s, 2));
                out.push(check_product_commutativity(
                    theory, &a, &b, &ua, &ub, tol, opts,
                )?);
            }
            out
        }
        Axiom::DecompositionInvariance => {
            let mixed = DensityMatrix::maximally_mixed(2);
            let parts = phi_pair_decomposition();
            let mut out = vec![
                check_decomposition_invariance(
                    theory,
                    &mixed,
                    &parts,
                    &rotation(PI / 4.0),
                    tol,
                    opts,
                )?,
                check_decomposition_invariance(
                    theory,
                    &mixed,
                    &parts,
                    &rotation(PI / 8.0),
                    tol,
                    opts,
                )?,
            ];
            for k in 0..o.suite_size / 2 {
                let s = derive_seed(seed, k as u64);
                let n = 2 + k % 3;
                let terms = 2 + k % n;
                let mut g = rng(s);
                let weights: Vec<f64> = (0..terms).map(|_| 0.1 + g.random::<f64>()).collect();
                let total: f64 = weights.iter().sum();
                let parts = weights
                    .iter()
                    .map(|w| Ok((w / total, DensityMatrix::pure(&haar_state(n, &mut g))?)))
                    .collect::<Result<Vec<_>>>()?;
                let rho = DensityMatrix::mixture(&parts)?;
                let u = random_unitary(n, derive_seed(s, 1));
                out.push(check_decomposition_invariance(
                    theory, &rho, &parts, &u, tol, opts,
                )?);
            }
            out
        }
        Axiom::Marginalization | Axiom::TimeSlicing => {
            return Err(crate::Error::InvalidParameter(format!(
                "{axiom} is not a table row"
            )));
        }
    };
    Ok(merged(reports))
}

/// Runs every (axiom, theory) cell of the comparison table on its curated
/// suite: the known counterexample where one exists plus seeded random
/// instances of dimension at most 4 (6 for product states).
pub fn axiom_table(options: &TableOptions) -> Result<AxiomTable> {
    let jobs: Vec<(usize, usize)> = (0..Axiom::TABLE.len())
        .flat_map(|a| (0..Theory::ALL.len()).map(move |t| (a, t)))
        .collect();
    let cells = jobs
        .par_iter()
        .map(|&(a, t)| {
            let axiom = Axiom::TABLE[a];
            let theory = Theory::ALL[t];
            let expected = EXPECTED_TABLE[a][t];
            let report = run_cell(axiom, theory, options)?;
            Ok(TableCell {
                axiom,
                theory,
                expected,
                matches: expected.agrees(report.verdict),
                report,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AxiomTable {
        options: options.clone(),
        cells,
    })
}

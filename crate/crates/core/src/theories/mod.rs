//! The four hidden-variable theories behind one interface.
//!
//! Each theory first produces the joint matrix `P` (row `j`, column `i` is
//! the probability of being at `|i>` before and `|j>` after), then `S` is
//! obtained by dividing column `i` by `rho_ii`. Columns with `rho_ii = 0` are
//! defined as the limit of the same computation on `(1 - eps) rho + eps I/N`.

mod dieks;
mod flow;
mod product;
mod schrodinger;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use dieks::dt_joint;
pub use flow::{ft_joint, FtMode, MAX_EXACT_DIM};
pub use product::pt_joint;
pub use schrodinger::{
    sinkhorn, sinkhorn_log_progress, sinkhorn_progress, st_joint, StDiagnostics,
};

use crate::blocks::DEFAULT_ZERO_TOL;
use crate::error::{Error, Result};
use crate::qcore::{evolve, regularize, DensityMatrix, RealMatrix, UnitaryMatrix};

/// Populations at or below this are treated as zero when forming `S`.
pub const POPULATION_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Theory {
    #[serde(rename = "PT")]
    Product,
    #[serde(rename = "DT")]
    Dieks,
    #[serde(rename = "FT")]
    Flow,
    #[serde(rename = "ST")]
    Schrodinger,
}

impl Theory {
    pub const ALL: [Theory; 4] = [
        Theory::Product,
        Theory::Dieks,
        Theory::Flow,
        Theory::Schrodinger,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            Theory::Product => "PT",
            Theory::Dieks => "DT",
            Theory::Flow => "FT",
            Theory::Schrodinger => "ST",
        }
    }

    pub fn long_name(self) -> &'static str {
        match self {
            Theory::Product => "Product",
            Theory::Dieks => "Dieks",
            Theory::Flow => "Flow",
            Theory::Schrodinger => "Schrödinger",
        }
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Theory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pt" | "product" => Ok(Theory::Product),
            "dt" | "dieks" => Ok(Theory::Dieks),
            "ft" | "flow" => Ok(Theory::Flow),
            "st" | "schrodinger" | "schrödinger" => Ok(Theory::Schrodinger),
            _ => Err(Error::InvalidParameter(format!("unknown theory '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoryOptions {
    pub zero_tol: f64,
    pub st_tol: f64,
    pub st_max_iter: usize,
    pub ft_mode: FtMode,
    pub eps_schedule: Vec<f64>,
    pub eps_agreement: f64,
}

impl Default for TheoryOptions {
    fn default() -> Self {
        Self {
            zero_tol: DEFAULT_ZERO_TOL,
            st_tol: 1e-10,
            st_max_iter: 100_000,
            ft_mode: FtMode::Exact,
            eps_schedule: vec![1e-4, 1e-5, 1e-6],
            eps_agreement: 1e-4,
        }
    }
}

/// Joint probabilities: row = output, column = input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JointMatrix(RealMatrix);

impl JointMatrix {
    /// Clamps entries in `[-1e-12, 0)` to zero.
    pub fn new(m: RealMatrix) -> Self {
        Self(m.map(|x| if (-1e-12..0.0).contains(&x) { 0.0 } else { x }))
    }

    pub fn as_matrix(&self) -> &RealMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> RealMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn get(&self, input: usize, output: usize) -> f64 {
        self.0.transition(input, output)
    }

    /// Largest deviation of column sums from `rho_ii` and row sums from
    /// `(U rho U^dag)_jj`.
    pub fn marginal_defect(&self, rho: &DensityMatrix, u: &UnitaryMatrix) -> Result<f64> {
        let out = evolve(rho, u)?;
        let cols = self.0.col_sums();
        let rows = self.0.row_sums();
        let mut worst: f64 = 0.0;
        for k in 0..self.dim() {
            worst = worst
                .max((cols[k] - rho.population(k)).abs())
                .max((rows[k] - out.population(k)).abs());
        }
        Ok(worst)
    }
}

/// Column-stochastic transition matrix: column `i` is the distribution of
/// the hidden variable after the step given it was `|i>` before.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StochasticMatrix {
    pub matrix: RealMatrix,
    /// Columns whose regularized limit did not settle; they hold zeros.
    pub undefined_columns: Vec<usize>,
}

impl StochasticMatrix {
    pub fn get(&self, input: usize, output: usize) -> f64 {
        self.matrix.transition(input, output)
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn is_defined(&self, col: usize) -> bool {
        !self.undefined_columns.contains(&col)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub st_iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub st_residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ft_permutations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ft_approximate: Option<bool>,
    /// Largest per-entry Monte-Carlo standard error in sampled mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ft_std_error: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_flow_value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero_mass_blocks: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub limit_columns: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoryResult {
    pub theory: Theory,
    pub dim: usize,
    #[serde(rename = "P")]
    pub joint: JointMatrix,
    #[serde(rename = "S")]
    pub stochastic: RealMatrix,
    pub undefined_columns: Vec<usize>,
    pub diagnostics: Diagnostics,
}

impl TheoryResult {
    pub fn stochastic_matrix(&self) -> StochasticMatrix {
        StochasticMatrix {
            matrix: self.stochastic.clone(),
            undefined_columns: self.undefined_columns.clone(),
        }
    }
}

/// `P(rho, U)` for the given theory along with theory-specific diagnostics.
pub fn joint(
    theory: Theory,
    rho: &DensityMatrix,
    u: &UnitaryMatrix,
    opts: &TheoryOptions,
) -> Result<(JointMatrix, Diagnostics)> {
    match theory {
        Theory::Product => Ok((pt_joint(rho, u)?, Diagnostics::default())),
        Theory::Dieks => {
            let (p, zero_blocks) = dieks::dt_joint_counted(rho, u, opts.zero_tol)?;
            Ok((
                p,
                Diagnostics {
                    zero_mass_blocks: Some(zero_blocks),
                    ..Default::default()
                },
            ))
        }
        Theory::Flow => ft_joint(rho, u, &opts.ft_mode),
        Theory::Schrodinger => {
            let (p, d) = st_joint(rho, u, opts.st_tol, opts.st_max_iter)?;
            Ok((
                p,
                Diagnostics {
                    st_iterations: Some(d.iterations),
                    st_residual: Some(d.residual),
                    ..Default::default()
                },
            ))
        }
    }
}

/// Divides column `i` of `P` by `rho_ii`. Columns with `rho_ii` at the floor
/// are taken from `recompute(eps)`, the joint matrix at the regularized state
/// `(1 - eps) rho + eps I/N`, for each `eps` of the schedule; the column is
/// accepted when consecutive estimates agree within `agreement`.
pub fn stochastic_from_joint_with(
    p: &JointMatrix,
    rho: &DensityMatrix,
    eps_schedule: &[f64],
    agreement: f64,
    mut recompute: impl FnMut(f64) -> Result<JointMatrix>,
) -> Result<StochasticMatrix> {
    let n = p.dim();
    let mut s = RealMatrix::zeros(n);
    let mut missing = Vec::new();
    for i in 0..n {
        let pop = rho.population(i);
        if pop > POPULATION_FLOOR {
            let col: Vec<f64> = p.as_matrix().column(i).iter().map(|x| x / pop).collect();
            s.set_column(i, &col);
        } else {
            missing.push(i);
        }
    }
    let mut undefined = Vec::new();
    if !missing.is_empty() {
        let mut estimates: Vec<Vec<Vec<f64>>> = vec![Vec::new(); missing.len()];
        for &eps in eps_schedule {
            let pe = recompute(eps)?;
            for (k, &i) in missing.iter().enumerate() {
                let col = pe.as_matrix().column(i);
                let total: f64 = col.iter().sum();
                estimates[k].push(col.iter().map(|x| x / total).collect());
            }
        }
        for (k, &i) in missing.iter().enumerate() {
            let settled = estimates[k].windows(2).all(|w| {
                w[0].iter()
                    .zip(&w[1])
                    .all(|(a, b)| (a - b).abs() <= agreement)
            });
            match estimates[k].last() {
                Some(col) if settled && col.iter().all(|x| x.is_finite()) => s.set_column(i, col),
                _ => undefined.push(i),
            }
        }
    }
    Ok(StochasticMatrix {
        matrix: s,
        undefined_columns: undefined,
    })
}

/// [`stochastic_from_joint_with`] where the regularized joint matrices come
/// from re-running `theory`.
pub fn stochastic_from_joint(
    p: &JointMatrix,
    rho: &DensityMatrix,
    theory: Theory,
    u: &UnitaryMatrix,
    opts: &TheoryOptions,
) -> Result<StochasticMatrix> {
    stochastic_from_joint_with(p, rho, &opts.eps_schedule, opts.eps_agreement, |eps| {
        let reg = regularize(rho, eps)?;
        // Column sums near eps/N need a scaling tolerance well below eps.
        let mut tight = opts.clone();
        tight.st_tol = (opts.st_tol * eps).max(1e-14);
        Ok(joint(theory, &reg, u, &tight)?.0)
    })
}

pub fn apply_theory(
    theory: Theory,
    rho: &DensityMatrix,
    u: &UnitaryMatrix,
    opts: &TheoryOptions,
) -> Result<TheoryResult> {
    let (p, mut diagnostics) = joint(theory, rho, u, opts)?;
    let s = stochastic_from_joint(&p, rho, theory, u, opts)?;
    diagnostics.limit_columns = (0..rho.dim())
        .filter(|&i| rho.population(i) <= POPULATION_FLOOR)
        .collect();
    Ok(TheoryResult {
        theory,
        dim: rho.dim(),
        joint: p,
        stochastic: s.matrix,
        undefined_columns: s.undefined_columns,
        diagnostics,
    })
}

/// Shorthand for the stochastic matrix alone.
pub fn stochastic(
    theory: Theory,
    rho: &DensityMatrix,
    u: &UnitaryMatrix,
    opts: &TheoryOptions,
) -> Result<RealMatrix> {
    Ok(apply_theory(theory, rho, u, opts)?.stochastic)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::qcore::{plus_state, rotation};

    #[test]
    fn theory_names_parse() {
        for t in Theory::ALL {
            assert_eq!(t.short_name().parse::<Theory>().unwrap(), t);
        }
        assert!("xt".parse::<Theory>().is_err());
    }

    #[test]
    fn dividing_diagonal_joint() {
        let p = JointMatrix::new(RealMatrix::identity(2).scale(0.5));
        let s = stochastic_from_joint_with(
            &p,
            &DensityMatrix::maximally_mixed(2),
            &[],
            1e-4,
            |_| unreachable!(),
        )
        .unwrap();
        assert_eq!(s.matrix, RealMatrix::identity(2));
        assert!(s.undefined_columns.is_empty());
    }

    #[test]
    fn product_limit_column_settles_on_output_distribution() {
        let rho = DensityMatrix::basis(2, 0);
        let u = rotation(PI / 4.0);
        let r = apply_theory(Theory::Product, &rho, &u, &TheoryOptions::default()).unwrap();
        assert!(r.undefined_columns.is_empty());
        assert_eq!(r.diagnostics.limit_columns, vec![1]);
        assert!((r.stochastic.get(0, 1) - 0.5).abs() < 1e-9);
        assert!((r.stochastic.get(1, 1) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn flip_flopping_limit_is_flagged() {
        let p = JointMatrix::new(RealMatrix::from_rows(&[&[1.0, 0.0], &[0.0, 0.0]]));
        let rho = DensityMatrix::basis(2, 0);
        let mut k = 0;
        let s = stochastic_from_joint_with(&p, &rho, &[1e-4, 1e-5, 1e-6], 1e-4, |eps| {
            k += 1;
            let a = if k % 2 == 0 { 1.0 } else { 0.0 };
            Ok(JointMatrix::new(RealMatrix::from_rows(&[
                &[1.0 - eps, a * eps],
                &[0.0, (1.0 - a) * eps],
            ])))
        })
        .unwrap();
        assert_eq!(s.undefined_columns, vec![1]);
    }

    #[test]
    fn flow_sends_plus_to_one() {
        let r = apply_theory(
            Theory::Flow,
            &plus_state(),
            &rotation(PI / 4.0),
            &TheoryOptions::default(),
        )
        .unwrap();
        assert!(r.stochastic.get(0, 0).abs() < 1e-12);
        assert!((r.stochastic.get(1, 0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn result_serializes_with_shared_matrix_format() {
        let r = apply_theory(
            Theory::Product,
            &DensityMatrix::maximally_mixed(2),
            &UnitaryMatrix::identity(2),
            &TheoryOptions::default(),
        )
        .unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["theory"], "PT");
        assert_eq!(v["dim"], 2);
        assert_eq!(v["S"]["entries"][0][0], 0.5);
        let back: TheoryResult = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}

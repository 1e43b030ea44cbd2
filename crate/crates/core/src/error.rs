use thiserror::Error;

use crate::qcore::RealMatrix;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong while building inputs or evaluating a theory.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("entries array has {found} elements, expected dim^2 = {expected}")]
    EntryCount { expected: usize, found: usize },

    #[error("matrix contains a non-finite entry at (row {row}, col {col})")]
    NonFinite { row: usize, col: usize },

    #[error("not unitary: max |U^dag U - I| entry is {deviation:.3e} (tolerance {tol:.1e})")]
    NotUnitary { deviation: f64, tol: f64 },

    #[error("not Hermitian: max |rho - rho^dag| entry is {deviation:.3e} (tolerance {tol:.1e})")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error(
        "not positive semidefinite: minimum eigenvalue {min_eigenvalue:.3e} (tolerance {tol:.1e})"
    )]
    NotPositive { min_eigenvalue: f64, tol: f64 },

    #[error("trace is {trace:.12} instead of 1 (tolerance {tol:.1e})")]
    BadTrace { trace: f64, tol: f64 },

    #[error("probability vector sums to {sum:.12} instead of 1")]
    BadProbabilities { sum: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("block with inputs {inputs:?} and outputs {outputs:?} is not square; zero tolerance misclassified an entry")]
    UnbalancedBlock {
        inputs: Vec<usize>,
        outputs: Vec<usize>,
    },

    #[error("exact flow symmetrization needs N <= {max}, got N = {dim}; use sampled mode")]
    ExactModeTooLarge { dim: usize, max: usize },

    #[error("flow {flow:.3e} on input {input} -> output {output} where the unitary entry is zero")]
    SupportViolation {
        input: usize,
        output: usize,
        flow: f64,
    },

    #[error(
        "Sinkhorn scaling did not converge in {} steps (last residual {:.3e})",
        .0.iterations, .0.residual_history.last().copied().unwrap_or(f64::NAN)
    )]
    NonConvergence(Box<NonConvergence>),

    #[error("malformed matrix document: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("internal invariant broken: {0}")]
    Internal(String),
}

/// State of a Sinkhorn run that hit its iteration cap.
#[derive(Debug, Clone)]
pub struct NonConvergence {
    pub iterations: usize,
    pub last_iterate: RealMatrix,
    /// Residuals of the most recent steps, oldest first.
    pub residual_history: Vec<f64>,
}

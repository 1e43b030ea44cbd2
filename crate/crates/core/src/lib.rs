//! Hidden-variable theories on a finite-dimensional Hilbert space with a fixed
//! basis.
//!
//! A theory turns a state `rho` and a unitary `U` into a stochastic matrix `S`
//! whose column `i` is the distribution of the hidden variable after `U`,
//! given that it was `|i>` before. Four theories are provided (product,
//! Dieks, flow and Schrödinger) together with executable checks for the
//! axioms one might ask such a theory to satisfy.
//!
//! Matrix layout convention used throughout: row index = output basis state,
//! column index = input basis state.

pub mod axioms;
pub mod blocks;
pub mod error;
pub mod flows;
pub mod format;
pub mod qcore;
pub mod theories;

pub use error::{Error, Result};
pub use qcore::{ComplexMatrix, DensityMatrix, ProbVector, RealMatrix, UnitaryMatrix};
pub use theories::{Theory, TheoryOptions, TheoryResult};

//! Dense complex linear algebra, quantum states and seeded generators.

mod matrix;
mod random;
mod state;

pub use matrix::{ComplexMatrix, RealMatrix};
pub use random::{
    density_with, haar_state, haar_unitary, perturb_unitary, perturb_unitary_within,
    random_block_unitary, random_density, random_permutation, random_unitary, rng, BlockIndices,
};
pub use state::{
    bell_state, born_vector, evolve, kron, minus_state, phi, phi_state, plus_state,
    product_amplitudes, regularize, rotation, unitarity_defect, validate_unitary, DensityMatrix,
    ProbVector, UnitaryMatrix, DEFAULT_TOL,
};

pub(crate) use matrix::check_dims;

pub use num_complex::Complex64;

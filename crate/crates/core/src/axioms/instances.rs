//! Concrete states and unitaries used as counterexamples and witnesses.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::qcore::{
    phi, plus_state, product_amplitudes, rotation, ComplexMatrix, DensityMatrix, UnitaryMatrix,
};

/// `[[1,0,0],[0,h,-h],[0,h,h]]` with `h = 1/sqrt2`: blocks `{0}` and `{1,2}`.
pub fn strong_continuity_unitary() -> UnitaryMatrix {
    let h = FRAC_1_SQRT_2;
    UnitaryMatrix::new(
        ComplexMatrix::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, h, -h], &[0.0, h, h]])
            .expect("finite"),
        1e-12,
    )
    .expect("orthogonal")
}

/// Pure state with amplitudes `(sqrt(1 - 2 delta^2), delta, sign * delta)`.
pub fn strong_continuity_state(delta: f64, sign: f64) -> DensityMatrix {
    let a = (1.0 - 2.0 * delta * delta).sqrt();
    DensityMatrix::pure_real(&[a, delta, sign * delta]).expect("normalized")
}

/// `(|00> + |11>)/sqrt2`.
pub fn bell() -> DensityMatrix {
    crate::qcore::bell_state()
}

/// `R(pi/8)` on the first qubit.
pub fn nogo_u_a() -> UnitaryMatrix {
    rotation(PI / 8.0).kron(&UnitaryMatrix::identity(2))
}

/// `R(-pi/8)` on the second qubit.
pub fn nogo_u_b() -> UnitaryMatrix {
    UnitaryMatrix::identity(2).kron(&rotation(-PI / 8.0))
}

/// Maximally mixed two-qubit state under `R(pi/8) (x) I`, where the product
/// theory moves mass between blocks.
pub fn tensor_witness() -> (DensityMatrix, UnitaryMatrix) {
    (
        DensityMatrix::maximally_mixed(4),
        rotation(PI / 8.0).kron(&UnitaryMatrix::identity(2)),
    )
}

/// `|phi(pi/4)> (x) |phi(-pi/8)>` with `R(pi/4)` on either qubit.
pub fn product_commutativity_witness() -> (
    [crate::qcore::Complex64; 2],
    [crate::qcore::Complex64; 2],
    UnitaryMatrix,
    UnitaryMatrix,
) {
    (
        phi(PI / 4.0),
        phi(-PI / 8.0),
        rotation(PI / 4.0),
        rotation(PI / 4.0),
    )
}

/// Equal mixture of `phi(pi/8)` and `phi(5pi/8)`, which is `I/2`.
pub fn phi_pair_decomposition() -> Vec<(f64, DensityMatrix)> {
    vec![
        (0.5, crate::qcore::phi_state(PI / 8.0)),
        (0.5, crate::qcore::phi_state(5.0 * PI / 8.0)),
    ]
}

/// `|+>` with `V = R(pi/4)` (sending it to `|1>`) and `W = R(-pi/4)`.
pub fn time_slicing_witness() -> (DensityMatrix, UnitaryMatrix, UnitaryMatrix) {
    (plus_state(), rotation(PI / 4.0), rotation(-PI / 4.0))
}

pub fn product_state(
    a: &[crate::qcore::Complex64],
    b: &[crate::qcore::Complex64],
) -> DensityMatrix {
    DensityMatrix::pure(&product_amplitudes(a, b)).expect("normalized")
}

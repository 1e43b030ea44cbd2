use crate::error::Result;
use crate::qcore::{check_dims, evolve, DensityMatrix, RealMatrix, UnitaryMatrix};

use super::JointMatrix;

/// Product theory: `P_ij = rho_ii (U rho U^dag)_jj`, so every column of `S`
/// is the output distribution.
pub fn pt_joint(rho: &DensityMatrix, u: &UnitaryMatrix) -> Result<JointMatrix> {
    check_dims(rho.dim(), u.dim())?;
    let p = rho.populations();
    let q = evolve(rho, u)?.populations();
    Ok(JointMatrix::new(RealMatrix::from_fn(rho.dim(), |j, i| {
        p[i] * q[j]
    })))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::qcore::{minus_state, plus_state, rotation};
    use crate::theories::{stochastic, Theory, TheoryOptions};

    #[test]
    fn plus_and_minus_under_quarter_rotation() {
        let opts = TheoryOptions::default();
        let u = rotation(PI / 4.0);
        let s = stochastic(Theory::Product, &plus_state(), &u, &opts).unwrap();
        assert!(s.max_abs_diff(&RealMatrix::from_rows(&[&[0.0, 0.0], &[1.0, 1.0]])) < 1e-15);
        let s = stochastic(Theory::Product, &minus_state(), &u, &opts).unwrap();
        assert!(s.max_abs_diff(&RealMatrix::from_rows(&[&[1.0, 1.0], &[0.0, 0.0]])) < 1e-15);
    }

    #[test]
    fn uniform_marginals_give_uniform_joint() {
        let p = pt_joint(
            &DensityMatrix::maximally_mixed(2),
            &UnitaryMatrix::identity(2),
        )
        .unwrap();
        assert_eq!(
            p.as_matrix(),
            &RealMatrix::from_rows(&[&[0.25, 0.25], &[0.25, 0.25]])
        );
    }
}

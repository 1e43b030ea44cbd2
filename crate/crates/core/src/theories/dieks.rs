use crate::blocks::minimal_blocks;
use crate::error::Result;
use crate::qcore::{check_dims, evolve, DensityMatrix, RealMatrix, UnitaryMatrix};

use super::JointMatrix;

/// Blocks carrying less output mass than this are treated as empty.
const EMPTY_BLOCK_MASS: f64 = 1e-12;

/// Dieks theory: the product theory applied inside each minimal block.
pub fn dt_joint(rho: &DensityMatrix, u: &UnitaryMatrix, zero_tol: f64) -> Result<JointMatrix> {
    Ok(dt_joint_counted(rho, u, zero_tol)?.0)
}

/// Also returns how many blocks were empty. An empty block gets the uniform
/// distribution over its outputs, which is what the regularized limit of
/// the block formula converges to.
pub(crate) fn dt_joint_counted(
    rho: &DensityMatrix,
    u: &UnitaryMatrix,
    zero_tol: f64,
) -> Result<(JointMatrix, usize)> {
    check_dims(rho.dim(), u.dim())?;
    let blocks = minimal_blocks(u, zero_tol)?;
    let p = rho.populations();
    let q = evolve(rho, u)?.populations();
    let mut joint = RealMatrix::zeros(rho.dim());
    let mut empty = 0;
    for block in &blocks.blocks {
        let mass: f64 = block.outputs.iter().map(|&j| q[j]).sum();
        if mass < EMPTY_BLOCK_MASS {
            empty += 1;
        }
        for &j in &block.outputs {
            let s = if mass < EMPTY_BLOCK_MASS {
                1.0 / block.outputs.len() as f64
            } else {
                q[j] / mass
            };
            for &i in &block.inputs {
                joint.set(j, i, p[i] * s);
            }
        }
    }
    Ok((JointMatrix::new(joint), empty))
}

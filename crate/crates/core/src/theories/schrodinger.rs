use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, NonConvergence, Result};
use crate::flows::FlowMatrix;
use crate::qcore::{check_dims, evolve, DensityMatrix, RealMatrix, UnitaryMatrix};

use super::{JointMatrix, POPULATION_FLOOR};

/// Entries that fall below this are flushed to zero.
const UNDERFLOW_GUARD: f64 = 1e-300;
/// How many trailing residuals a non-convergence error keeps.
const HISTORY_LEN: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StDiagnostics {
    pub iterations: usize,
    pub residual: f64,
}

fn residual(m: &RealMatrix, cols: &[f64], rows: &[f64]) -> f64 {
    let c = m.col_sums();
    let r = m.row_sums();
    c.iter()
        .zip(cols)
        .chain(r.iter().zip(rows))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

/// Alternating scaling of `|U|`: odd steps normalize columns to `rho_ii`,
/// even steps normalize rows to `(U rho U^dag)_jj`. `observer` sees every
/// iterate starting from `t = 0`.
pub fn sinkhorn(
    rho: &DensityMatrix,
    u: &UnitaryMatrix,
    tol: f64,
    max_iter: usize,
    mut observer: impl FnMut(usize, &RealMatrix),
) -> Result<(RealMatrix, StDiagnostics)> {
    check_dims(rho.dim(), u.dim())?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let n = rho.dim();
    let floor = |x: f64| if x <= POPULATION_FLOOR { 0.0 } else { x };
    let cols: Vec<f64> = rho.populations().into_iter().map(floor).collect();
    let rows: Vec<f64> = evolve(rho, u)?
        .populations()
        .into_iter()
        .map(floor)
        .collect();

    let mut m = u.matrix().abs();
    for k in 0..n {
        if cols[k] == 0.0 {
            m.set_column(k, &vec![0.0; n]);
        }
        if rows[k] == 0.0 {
            for c in 0..n {
                m.set(k, c, 0.0);
            }
        }
    }
    observer(0, &m);

    let mut history = VecDeque::with_capacity(HISTORY_LEN);
    let mut t = 0;
    loop {
        let res = residual(&m, &cols, &rows);
        if history.len() == HISTORY_LEN {
            history.pop_front();
        }
        history.push_back(res);
        if res <= tol {
            return Ok((
                m,
                StDiagnostics {
                    iterations: t,
                    residual: res,
                },
            ));
        }
        if t >= max_iter {
            return Err(Error::NonConvergence(Box::new(NonConvergence {
                iterations: t,
                last_iterate: m,
                residual_history: history.into_iter().collect(),
            })));
        }
        t += 1;
        if t % 2 == 1 {
            let sums = m.col_sums();
            for c in 0..n {
                if cols[c] > 0.0 && sums[c] > 0.0 {
                    let f = cols[c] / sums[c];
                    for r in 0..n {
                        m.set(r, c, m.get(r, c) * f);
                    }
                }
            }
        } else {
            let sums = m.row_sums();
            for r in 0..n {
                if rows[r] > 0.0 && sums[r] > 0.0 {
                    let f = rows[r] / sums[r];
                    for c in 0..n {
                        m.set(r, c, m.get(r, c) * f);
                    }
                }
            }
        }
        m = m.map(|x| if x < UNDERFLOW_GUARD { 0.0 } else { x });
        observer(t, &m);
    }
}

/// Schrödinger theory: the limit of alternating column and row scaling.
pub fn st_joint(
    rho: &DensityMatrix,
    u: &UnitaryMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<(JointMatrix, StDiagnostics)> {
    let (m, d) = sinkhorn(rho, u, tol, max_iter, |_, _| {})?;
    Ok((JointMatrix::new(m), d))
}

/// `ln Z` for `Z = prod_ij iterate_ij ^ f_ij`, with `0^0 = 1`.
pub fn sinkhorn_log_progress(iterate: &RealMatrix, f: &FlowMatrix) -> Result<f64> {
    check_dims(iterate.dim(), f.dim())?;
    let n = iterate.dim();
    let mut log_z = 0.0;
    for c in 0..n {
        for r in 0..n {
            let flow = f.as_matrix().get(r, c);
            if flow <= 0.0 {
                continue;
            }
            let x = iterate.get(r, c);
            if x <= 0.0 {
                return Err(Error::SupportViolation {
                    input: c,
                    output: r,
                    flow,
                });
            }
            log_z += flow * x.ln();
        }
    }
    Ok(log_z)
}

pub fn sinkhorn_progress(iterate: &RealMatrix, f: &FlowMatrix) -> Result<f64> {
    Ok(sinkhorn_log_progress(iterate, f)?.exp())
}

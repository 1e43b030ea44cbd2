use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flows::{build_network, lex_max_flow_network, FlowNetwork};
use crate::qcore::{random_permutation, rng, DensityMatrix, RealMatrix, UnitaryMatrix};

use super::{Diagnostics, JointMatrix};

/// Largest dimension for which all `N!` relabelings are enumerated.
pub const MAX_EXACT_DIM: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum FtMode {
    Exact,
    Sampled { samples: usize, seed: u64 },
}

impl FtMode {
    pub fn sampled(samples: usize, seed: u64) -> Self {
        FtMode::Sampled { samples, seed }
    }
}

/// Lexicographic max flow of the relabeled network, mapped back to the
/// original labels.
fn relabeled_flow(net: &FlowNetwork, perm: &[usize]) -> (RealMatrix, f64) {
    let f = lex_max_flow_network(&net.relabel(perm));
    let n = perm.len();
    let mut back = RealMatrix::zeros(n);
    for r in 0..n {
        for c in 0..n {
            back.set(perm[r], perm[c], f.as_matrix().get(r, c));
        }
    }
    let value = f.value();
    (back, value)
}

/// Flow theory: the lexicographic max flow averaged over every relabeling of
/// the basis (or over seeded random relabelings in sampled mode).
pub fn ft_joint(
    rho: &DensityMatrix,
    u: &UnitaryMatrix,
    mode: &FtMode,
) -> Result<(JointMatrix, Diagnostics)> {
    let n = rho.dim();
    let net = build_network(rho, u)?;
    let perms: Vec<Vec<usize>> = match *mode {
        FtMode::Exact => {
            if n > MAX_EXACT_DIM {
                return Err(Error::ExactModeTooLarge {
                    dim: n,
                    max: MAX_EXACT_DIM,
                });
            }
            (0..n).permutations(n).collect()
        }
        FtMode::Sampled { samples, seed } => {
            if samples == 0 {
                return Err(Error::InvalidParameter(
                    "sampled mode needs at least one sample".into(),
                ));
            }
            let mut r = rng(seed);
            (0..samples)
                .map(|_| random_permutation(n, &mut r))
                .collect()
        }
    };
    let flows: Vec<(RealMatrix, f64)> = perms.par_iter().map(|p| relabeled_flow(&net, p)).collect();

    let count = flows.len() as f64;
    let mut sum = RealMatrix::zeros(n);
    let mut sum_sq = RealMatrix::zeros(n);
    let mut min_value = f64::INFINITY;
    for (f, value) in &flows {
        min_value = min_value.min(*value);
        for r in 0..n {
            for c in 0..n {
                let x = f.get(r, c);
                sum.add_at(r, c, x);
                sum_sq.add_at(r, c, x * x);
            }
        }
    }
    let mean = sum.scale(1.0 / count);
    let mut diagnostics = Diagnostics {
        ft_permutations: Some(flows.len()),
        ft_approximate: Some(matches!(mode, FtMode::Sampled { .. })),
        min_flow_value: Some(min_value),
        ..Default::default()
    };
    if let FtMode::Sampled { .. } = mode {
        let mut worst: f64 = 0.0;
        for r in 0..n {
            for c in 0..n {
                let m = mean.get(r, c);
                let var = (sum_sq.get(r, c) / count - m * m).max(0.0);
                worst = worst.max((var / count).sqrt());
            }
        }
        diagnostics.ft_std_error = Some(worst);
    }
    Ok((JointMatrix::new(mean), diagnostics))
}

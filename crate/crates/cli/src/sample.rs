//! Hidden-variable trajectories through a sequence of unitaries.

use rand::Rng;
use serde::{Deserialize, Serialize};

use hvt_core::qcore::{evolve, rng};
use hvt_core::theories::apply_theory;
use hvt_core::{DensityMatrix, RealMatrix, Theory, TheoryOptions, UnitaryMatrix};

use crate::error::CliError;

/// Trajectories kept verbatim in the report.
const EXAMPLES: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub theory: Theory,
    pub trajectories: usize,
    pub seed: u64,
    /// `S_t` for the step `rho_t -> rho_{t+1}`.
    pub stochastic: Vec<RealMatrix>,
    /// Diagonal of `rho_t` for `t = 0..=T`.
    pub born: Vec<Vec<f64>>,
    /// `S_{t-1} ... S_0 born_0`, the exact law of `v_t`.
    pub chained: Vec<Vec<f64>>,
    pub empirical: Vec<Vec<f64>>,
    /// Largest `|empirical - born|` over all steps and states.
    pub max_born_deviation: f64,
    /// Counts of `v_t -> v_{t+1}`, row = `v_{t+1}`, column = `v_t`.
    pub transition_counts: Vec<Vec<Vec<u64>>>,
    /// Counts of `(v_0, v_T)`, row = `v_T`, column = `v_0`.
    pub endpoint_counts: Vec<Vec<u64>>,
    pub examples: Vec<Vec<usize>>,
}

fn draw(probs: impl Iterator<Item = f64>, u: f64) -> usize {
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (k, p) in probs.enumerate() {
        if p > 0.0 {
            acc += p;
            last_positive = k;
            if u < acc {
                return k;
            }
        }
    }
    last_positive
}

fn reachable_undefined(law: &[f64], undefined: &[usize]) -> Option<usize> {
    undefined.iter().copied().find(|&i| law[i] > 0.0)
}

/// Runs `n` trajectories from `rho` through `us` with a fresh ChaCha stream
/// seeded by `seed`. Fails naming the step if a trajectory can reach an input
/// whose transition column is undefined.
pub fn sample_trajectories(
    theory: Theory,
    rho: &DensityMatrix,
    us: &[UnitaryMatrix],
    n: usize,
    seed: u64,
    opts: &TheoryOptions,
) -> Result<SampleReport, CliError> {
    let dim = rho.dim();
    let mut state = rho.clone();
    let mut born = vec![state.populations()];
    let mut chained = vec![state.populations()];
    let mut stochastic = Vec::with_capacity(us.len());
    for (t, u) in us.iter().enumerate() {
        let result = apply_theory(theory, &state, u, opts)?;
        let q = chained.last().expect("nonempty");
        if let Some(input) = reachable_undefined(q, &result.undefined_columns) {
            return Err(CliError::UndefinedColumn {
                step: t + 1,
                input,
                probability: q[input],
            });
        }
        let next: Vec<f64> = (0..dim)
            .map(|j| {
                (0..dim)
                    .map(|i| result.stochastic.transition(i, j) * q[i])
                    .sum()
            })
            .collect();
        chained.push(next);
        state = evolve(&state, u)?;
        born.push(state.populations());
        stochastic.push(result.stochastic);
    }

    let steps = us.len();
    let mut rng = rng(seed);
    let mut marginal = vec![vec![0u64; dim]; steps + 1];
    let mut transition_counts = vec![vec![vec![0u64; dim]; dim]; steps];
    let mut endpoint_counts = vec![vec![0u64; dim]; dim];
    let mut examples = Vec::new();
    let mut path = Vec::with_capacity(steps + 1);
    for k in 0..n {
        path.clear();
        let mut v = draw(born[0].iter().copied(), rng.random::<f64>());
        path.push(v);
        marginal[0][v] += 1;
        for (t, s) in stochastic.iter().enumerate() {
            let w = draw((0..dim).map(|j| s.transition(v, j)), rng.random::<f64>());
            transition_counts[t][w][v] += 1;
            marginal[t + 1][w] += 1;
            v = w;
            path.push(v);
        }
        endpoint_counts[path[steps]][path[0]] += 1;
        if k < EXAMPLES {
            examples.push(path.clone());
        }
    }

    let empirical: Vec<Vec<f64>> = marginal
        .iter()
        .map(|row| row.iter().map(|&c| c as f64 / n.max(1) as f64).collect())
        .collect();
    let max_born_deviation = empirical
        .iter()
        .zip(&born)
        .flat_map(|(e, b)| e.iter().zip(b).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max);
    Ok(SampleReport {
        theory,
        trajectories: n,
        seed,
        stochastic,
        born,
        chained,
        empirical,
        max_born_deviation,
        transition_counts,
        endpoint_counts,
        examples,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use hvt_core::qcore::{plus_state, rotation};

    use super::*;

    #[test]
    fn draw_skips_zero_mass() {
        assert_eq!(draw([0.0, 1.0].into_iter(), 0.999_999), 1);
        assert_eq!(draw([0.5, 0.0, 0.5].into_iter(), 0.5), 2);
        assert_eq!(draw([0.5, 0.5, 0.0].into_iter(), 1.0), 1);
    }

    #[test]
    fn deterministic_under_seed() {
        let us = [rotation(PI / 8.0), rotation(PI / 5.0)];
        let opts = TheoryOptions::default();
        let a = sample_trajectories(Theory::Flow, &plus_state(), &us, 500, 9, &opts).unwrap();
        let b = sample_trajectories(Theory::Flow, &plus_state(), &us, 500, 9, &opts).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.examples.len(), 5);
        assert!(a
            .examples
            .iter()
            .all(|p| p.len() == 3 && p.iter().all(|&v| v < 2)));
    }

    #[test]
    fn chained_law_matches_born_for_marginalizing_theories() {
        let us = [rotation(0.3), rotation(-1.1), rotation(0.7)];
        for theory in Theory::ALL {
            let r =
                sample_trajectories(theory, &plus_state(), &us, 1, 0, &TheoryOptions::default())
                    .unwrap();
            for (c, b) in r.chained.iter().zip(&r.born) {
                for (x, y) in c.iter().zip(b) {
                    assert!((x - y).abs() < 1e-8, "{theory}: {x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn undefined_columns_only_matter_with_mass() {
        assert_eq!(reachable_undefined(&[1.0, 0.0, 0.0], &[1, 2]), None);
        assert_eq!(reachable_undefined(&[0.5, 0.0, 1e-15], &[1, 2]), Some(2));
        assert_eq!(reachable_undefined(&[0.5, 0.5], &[]), None);
    }
}

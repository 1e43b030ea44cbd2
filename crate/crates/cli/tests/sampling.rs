use std::f64::consts::PI;

use hvt_cli::sample_trajectories;
use hvt_core::axioms::repro_nogo;
use hvt_core::qcore::{bell_state, phi_state, rotation};
use hvt_core::{Theory, TheoryOptions, UnitaryMatrix};

#[test]
fn empirical_marginals_approach_born() {
    let us = [rotation(PI / 5.0), rotation(-PI / 3.0), rotation(0.4)];
    let opts = TheoryOptions::default();
    for theory in Theory::ALL {
        for n in [1_000, 10_000, 100_000] {
            let r = sample_trajectories(theory, &phi_state(0.3), &us, n, 5, &opts).unwrap();
            let bound = 3.0 / (n as f64).sqrt();
            assert!(
                r.max_born_deviation <= bound,
                "{theory} n={n}: {} > {bound}",
                r.max_born_deviation
            );
        }
    }
}

#[test]
fn flow_trajectory_frequency_matches_the_exact_chain() {
    let id = UnitaryMatrix::identity(2);
    let us = [rotation(PI / 8.0).kron(&id), id.kron(&rotation(-PI / 8.0))];
    let opts = TheoryOptions::default();
    let n = 100_000;
    let r = sample_trajectories(Theory::Flow, &bell_state(), &us, n, 17, &opts).unwrap();
    let exact = repro_nogo(&opts)
        .unwrap()
        .rows
        .into_iter()
        .find(|row| row.theory == Theory::Flow)
        .unwrap()
        .pr_e_a_first;
    // E: v0 = |00> and v2 = |10>.
    let freq = r.endpoint_counts[2][0] as f64 / n as f64;
    let se = (exact * (1.0 - exact) / n as f64).sqrt();
    assert!(
        (freq - exact).abs() <= 3.0 * se,
        "{freq} vs {exact} (se {se})"
    );
}

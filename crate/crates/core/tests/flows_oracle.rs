//! Flow routines against independent oracles: a chain of linear programs for
//! the lexicographic maximum and exhaustive cut enumeration for the value.

use hvt_core::flows::{build_network, lex_max_flow_network, max_flow, FlowMatrix, FlowNetwork};
use hvt_core::qcore::{
    random_block_unitary, random_density, random_unitary, rng, DensityMatrix, UnitaryMatrix,
};
use minilp::{ComparisonOp, OptimizationDirection, Problem, Variable};
use proptest::prelude::*;

const SLACK: f64 = 1e-9;

/// Lexicographic maximum by solving one LP per middle edge, each fixing the
/// edges before it to their optimal values.
fn lp_lex_max(net: &FlowNetwork) -> Vec<Vec<f64>> {
    let n = net.dim();
    let mut fixed: Vec<f64> = Vec::new();
    // First objective is the total flow, then f(0,0), f(0,1), ...
    for step in 0..=n * n {
        let mut lp = Problem::new(OptimizationDirection::Maximize);
        let vars: Vec<Variable> = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                let obj = match step {
                    0 => 1.0,
                    s if s - 1 == k => 1.0,
                    _ => 0.0,
                };
                lp.add_var(obj, (0.0, net.capacity(i, j)))
            })
            .collect();
        for i in 0..n {
            let row: Vec<(Variable, f64)> = (0..n).map(|j| (vars[i * n + j], 1.0)).collect();
            lp.add_constraint(row.as_slice(), ComparisonOp::Le, net.source_caps()[i]);
        }
        for j in 0..n {
            let col: Vec<(Variable, f64)> = (0..n).map(|i| (vars[i * n + j], 1.0)).collect();
            lp.add_constraint(col.as_slice(), ComparisonOp::Le, net.sink_caps()[j]);
        }
        if step > 0 {
            let all: Vec<(Variable, f64)> = vars.iter().map(|&v| (v, 1.0)).collect();
            lp.add_constraint(all.as_slice(), ComparisonOp::Ge, fixed[0] - SLACK);
            for (k, &value) in fixed.iter().enumerate().skip(1) {
                lp.add_constraint([(vars[k - 1], 1.0)], ComparisonOp::Ge, value - SLACK);
            }
        }
        let sol = lp.solve().expect("oracle LP is feasible");
        fixed.push(sol.objective());
    }
    (0..n)
        .map(|i| (0..n).map(|j| fixed[1 + i * n + j]).collect())
        .collect()
}

/// Minimum s-t cut over all `2^(2N)` choices of source-side vertices.
fn min_cut(net: &FlowNetwork) -> f64 {
    let n = net.dim();
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << (2 * n)) {
        let src_side_input = |i: usize| mask & (1 << i) != 0;
        let src_side_output = |j: usize| mask & (1 << (n + j)) != 0;
        let mut cut = 0.0;
        for i in 0..n {
            if !src_side_input(i) {
                cut += net.source_caps()[i];
            }
        }
        for i in 0..n {
            for j in 0..n {
                if src_side_input(i) && !src_side_output(j) {
                    cut += net.capacity(i, j);
                }
            }
        }
        for j in 0..n {
            if src_side_output(j) {
                cut += net.sink_caps()[j];
            }
        }
        best = best.min(cut);
    }
    best
}

fn assert_feasible(net: &FlowNetwork, f: &FlowMatrix) {
    let n = net.dim();
    for i in 0..n {
        let out: f64 = (0..n).map(|j| f.flow(i, j)).sum();
        assert!(out <= net.source_caps()[i] + 1e-9);
        for j in 0..n {
            assert!(f.flow(i, j) >= 0.0);
            assert!(f.flow(i, j) <= net.capacity(i, j) + 1e-9);
        }
    }
    for j in 0..n {
        let inflow: f64 = (0..n).map(|i| f.flow(i, j)).sum();
        assert!(inflow <= net.sink_caps()[j] + 1e-9);
    }
}

fn instance(n: usize, seed: u64, rank: usize, blocky: bool) -> (DensityMatrix, UnitaryMatrix) {
    let rho = random_density(n, seed, rank.clamp(1, n)).unwrap();
    let u = if blocky && n >= 2 {
        let sizes = [1, n - 1];
        random_block_unitary(&sizes, &mut rng(seed ^ 0x5eed)).0
    } else {
        random_unitary(n, seed.wrapping_add(17))
    };
    (rho, u)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lex_flow_matches_sequential_lp(n in 2usize..=3, seed in any::<u64>(), rank in 1usize..=3, blocky in any::<bool>()) {
        let (rho, u) = instance(n, seed, rank, blocky);
        let net = build_network(&rho, &u).unwrap();
        let f = lex_max_flow_network(&net);
        let oracle = lp_lex_max(&net);
        for (i, row) in oracle.iter().enumerate() {
            for (j, &lp) in row.iter().enumerate() {
                prop_assert!((f.flow(i, j) - lp).abs() <= 1e-7,
                    "f({i},{j}) = {} vs LP {lp}", f.flow(i, j));
            }
        }
    }

    #[test]
    fn max_flow_value_equals_min_cut(n in 1usize..=4, seed in any::<u64>(), rank in 1usize..=4, blocky in any::<bool>()) {
        let (rho, u) = instance(n, seed, rank, blocky);
        let net = build_network(&rho, &u).unwrap();
        let (f, value) = max_flow(&net);
        assert_feasible(&net, &f);
        prop_assert!((value - min_cut(&net)).abs() <= 1e-9);
        prop_assert!((f.value() - value).abs() <= 1e-9);
    }

    #[test]
    fn unit_of_flow_always_fits(n in 1usize..=8, seed in any::<u64>(), rank in 1usize..=8) {
        let (rho, u) = instance(n, seed, rank, false);
        let net = build_network(&rho, &u).unwrap();
        let (f, value) = max_flow(&net);
        prop_assert!((value - 1.0).abs() <= 1e-9);
        let lex = lex_max_flow_network(&net);
        assert_feasible(&net, &lex);
        prop_assert!((lex.value() - 1.0).abs() <= 1e-9);
        prop_assert!((f.value() - 1.0).abs() <= 1e-9);
    }
}

#[test]
fn lp_oracle_agrees_on_degenerate_networks() {
    for k in 0..3 {
        let rho = DensityMatrix::basis(3, k);
        let net = build_network(&rho, &UnitaryMatrix::identity(3)).unwrap();
        let f = lex_max_flow_network(&net);
        let oracle = lp_lex_max(&net);
        for (i, row) in oracle.iter().enumerate() {
            for (j, &lp) in row.iter().enumerate() {
                assert!((f.flow(i, j) - lp).abs() <= 1e-7);
            }
        }
    }
}

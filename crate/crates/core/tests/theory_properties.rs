//! Invariants every theory should satisfy on random instances.

use hvt_core::blocks::{minimal_blocks, DEFAULT_ZERO_TOL};
use hvt_core::qcore::{
    haar_state, random_block_unitary, random_density, random_permutation, random_unitary, rng,
    DensityMatrix, UnitaryMatrix,
};
use hvt_core::theories::{apply_theory, dt_joint, pt_joint, Theory, TheoryOptions};
use proptest::prelude::*;

fn block_sizes(n: usize, cut: usize) -> Vec<usize> {
    let cut = cut % n;
    if cut == 0 {
        vec![n]
    } else {
        vec![cut, n - cut]
    }
}

fn instance(n: usize, seed: u64, rank: usize, cut: usize) -> (DensityMatrix, UnitaryMatrix) {
    let rho = random_density(n, seed, rank.clamp(1, n)).unwrap();
    let (u, _) = random_block_unitary(&block_sizes(n, cut), &mut rng(seed.wrapping_mul(31) + 7));
    (rho, u)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(125))]

    #[test]
    fn marginals_are_born_probabilities(n in 1usize..=6, seed in any::<u64>(), rank in 1usize..=6, cut in 0usize..6) {
        let (rho, u) = instance(n, seed, rank, cut);
        let opts = TheoryOptions::default();
        for theory in Theory::ALL {
            let r = apply_theory(theory, &rho, &u, &opts).unwrap();
            prop_assert!(r.joint.marginal_defect(&rho, &u).unwrap() <= 1e-7, "{theory}");
            for i in 0..n {
                if r.undefined_columns.contains(&i) {
                    continue;
                }
                for j in 0..n {
                    let pij = r.joint.get(i, j);
                    prop_assert!((pij - r.stochastic.transition(i, j) * rho.population(i)).abs() <= 1e-8);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn relabeling_commutes_with_every_theory(n in 2usize..=5, seed in any::<u64>(), rank in 1usize..=5, cut in 0usize..5) {
        let (rho, u) = instance(n, seed, rank, cut);
        let perm = random_permutation(n, &mut rng(seed ^ 0xabcd));
        let opts = TheoryOptions::default();
        for theory in Theory::ALL {
            let s = apply_theory(theory, &rho, &u, &opts).unwrap().stochastic;
            let t = apply_theory(theory, &rho.relabel(&perm), &u.relabel(&perm), &opts).unwrap().stochastic;
            prop_assert!(s.relabel(&perm).max_abs_diff(&t) <= 1e-7, "{theory}");
        }
    }

    #[test]
    fn no_mass_crosses_minimal_blocks(n in 2usize..=5, seed in any::<u64>(), rank in 1usize..=5, cut in 1usize..5) {
        let (rho, u) = instance(n, seed, rank, cut);
        let blocks = minimal_blocks(&u, DEFAULT_ZERO_TOL).unwrap();
        let opts = TheoryOptions::default();
        for theory in [Theory::Dieks, Theory::Flow, Theory::Schrodinger] {
            let s = apply_theory(theory, &rho, &u, &opts).unwrap().stochastic;
            for i in 0..n {
                for j in 0..n {
                    if !blocks.connects(i, j) {
                        prop_assert!(s.transition(i, j) <= 1e-9, "{theory} ({i},{j})");
                    }
                }
            }
        }
    }

    #[test]
    fn scaling_keeps_exactly_the_support(n in 2usize..=5, seed in any::<u64>(), cut in 0usize..5) {
        let (rho, u) = instance(n, seed, n, cut);
        let r = apply_theory(Theory::Schrodinger, &rho, &u, &TheoryOptions::default()).unwrap();
        for i in 0..n {
            for j in 0..n {
                let zero = u.matrix().transition(i, j).norm() <= DEFAULT_ZERO_TOL;
                let p = r.joint.get(i, j);
                let ok = if zero { p == 0.0 } else { p > 0.0 };
                prop_assert!(ok, "({i},{j}) = {p}");
            }
        }
    }

    #[test]
    fn flow_joint_respects_capacities(n in 2usize..=5, seed in any::<u64>(), rank in 1usize..=5, cut in 0usize..5) {
        let (rho, u) = instance(n, seed, rank, cut);
        let r = apply_theory(Theory::Flow, &rho, &u, &TheoryOptions::default()).unwrap();
        for i in 0..n {
            for j in 0..n {
                prop_assert!(r.joint.get(i, j) <= u.matrix().transition(i, j).norm() + 1e-9);
            }
        }
    }

    #[test]
    fn scaling_factorizes_over_an_idle_subsystem(da in 2usize..=3, db in 2usize..=3, seed in any::<u64>()) {
        let mut g = rng(seed);
        let a = haar_state(da, &mut g);
        let b = haar_state(db, &mut g);
        let ua = random_unitary(da, seed.wrapping_add(1));
        let opts = TheoryOptions::default();
        let rho_a = DensityMatrix::pure(&a).unwrap();
        let rho_ab = rho_a.kron(&DensityMatrix::pure(&b).unwrap());
        let u_ab = ua.kron(&UnitaryMatrix::identity(db));
        let joint = apply_theory(Theory::Schrodinger, &rho_ab, &u_ab, &opts).unwrap().stochastic;
        let single = apply_theory(Theory::Schrodinger, &rho_a, &ua, &opts).unwrap().stochastic;
        let expected = single.kron(&hvt_core::RealMatrix::identity(db));
        prop_assert!(joint.max_abs_diff(&expected) <= 1e-7);
    }

    #[test]
    fn dieks_is_product_on_a_single_block(n in 1usize..=5, seed in any::<u64>(), rank in 1usize..=5) {
        let rho = random_density(n, seed, rank.clamp(1, n)).unwrap();
        let u = random_unitary(n, seed.wrapping_add(3));
        let d = dt_joint(&rho, &u, DEFAULT_ZERO_TOL).unwrap();
        let p = pt_joint(&rho, &u).unwrap();
        prop_assert!(d.as_matrix().max_abs_diff(p.as_matrix()) <= 1e-12);
    }
}

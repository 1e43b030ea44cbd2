use itertools::Itertools;

use crate::blocks::{minimal_blocks, same_blocks};
use crate::error::{Error, Result};
use crate::qcore::{
    evolve, perturb_unitary, perturb_unitary_within, random_density, random_permutation, rng,
    DensityMatrix, RealMatrix, UnitaryMatrix,
};
use crate::theories::{Theory, TheoryOptions};

use super::{
    derive_seed, joint_of, stochastic_of, worst_of, Axiom, AxiomReport, Instance, Verdict, Witness,
};

/// Deviation bound used for robustness probes: `4 N^2` times the perturbation
/// scale `N delta`, with 10% slack.
pub fn robustness_bound(dim: usize, delta: f64) -> f64 {
    let n = dim as f64;
    4.0 * n * n * (n * delta) * 1.1
}

fn mismatch(axiom: Axiom) -> Error {
    Error::InvalidParameter(format!("instance kind does not fit the {axiom} check"))
}

/// Two-step stochastic matrix: `U_first`, then `U_second`.
fn chained(
    theory: Theory,
    rho: &DensityMatrix,
    first: &UnitaryMatrix,
    second: &UnitaryMatrix,
    opts: &TheoryOptions,
) -> Result<RealMatrix> {
    let s1 = stochastic_of(theory, rho, first, opts)?;
    let mid = evolve(rho, first)?;
    let s2 = stochastic_of(theory, &mid, second, opts)?;
    s2.mul(&s1)
}

fn lift_a(u_a: &UnitaryMatrix, db: usize) -> UnitaryMatrix {
    u_a.kron(&UnitaryMatrix::identity(db))
}

fn lift_b(u_b: &UnitaryMatrix, da: usize) -> UnitaryMatrix {
    UnitaryMatrix::identity(da).kron(u_b)
}

pub(crate) fn deviation(
    axiom: Axiom,
    theory: Theory,
    instance: &Instance,
    opts: &TheoryOptions,
) -> Result<f64> {
    match (axiom, instance) {
        (Axiom::Marginalization, Instance::Single { rho, u }) => {
            let s = stochastic_of(theory, rho, u, opts)?;
            let p = rho.populations();
            let q = evolve(rho, u)?.populations();
            let n = rho.dim();
            Ok((0..n)
                .map(|j| {
                    let predicted: f64 = (0..n).map(|i| s.transition(i, j) * p[i]).sum();
                    (predicted - q[j]).abs()
                })
                .fold(0.0, f64::max))
        }
        (Axiom::Symmetry, Instance::Relabeled { rho, u, perm }) => {
            let s = stochastic_of(theory, rho, u, opts)?;
            let t = stochastic_of(theory, &rho.relabel(perm), &u.relabel(perm), opts)?;
            Ok(s.relabel(perm).max_abs_diff(&t))
        }
        (Axiom::Indifference, Instance::Single { rho, u }) => {
            let s = stochastic_of(theory, rho, u, opts)?;
            let blocks = minimal_blocks(u, opts.zero_tol)?;
            let n = rho.dim();
            let mut worst: f64 = 0.0;
            for i in 0..n {
                for j in 0..n {
                    if !blocks.connects(i, j) {
                        worst = worst.max(s.transition(i, j));
                    }
                }
            }
            Ok(worst)
        }
        (
            Axiom::Robustness | Axiom::BlockRobustness,
            Instance::Perturbed {
                rho,
                u,
                rho_tilde,
                u_tilde,
            },
        ) => {
            let p = joint_of(theory, rho, u, opts)?;
            let pt = joint_of(theory, rho_tilde, u_tilde, opts)?;
            Ok(p.max_abs_diff(&pt))
        }
        (
            Axiom::Commutativity | Axiom::ProductCommutativity,
            Instance::Bipartite {
                rho,
                u_a,
                u_b,
                dims,
            },
        ) => {
            let (da, db) = *dims;
            let ua = lift_a(u_a, db);
            let ub = lift_b(u_b, da);
            let a_first = chained(theory, rho, &ua, &ub, opts)?;
            let b_first = chained(theory, rho, &ub, &ua, opts)?;
            Ok(a_first.max_abs_diff(&b_first))
        }
        (Axiom::DecompositionInvariance, Instance::Decomposition { parts, u }) => {
            let rho = DensityMatrix::mixture(parts)?;
            let s = stochastic_of(theory, &rho, u, opts)?;
            let mut mix = RealMatrix::zeros(rho.dim());
            for (w, psi) in parts {
                mix = mix.add(&stochastic_of(theory, psi, u, opts)?.scale(*w))?;
            }
            Ok(s.max_abs_diff(&mix))
        }
        (Axiom::TimeSlicing, Instance::Sliced { rho, v, w }) => {
            let whole = stochastic_of(theory, rho, &v.compose(w)?, opts)?;
            Ok(whole.max_abs_diff(&chained(theory, rho, v, w, opts)?))
        }
        _ => Err(mismatch(axiom)),
    }
}

fn equality_report(
    axiom: Axiom,
    theory: Theory,
    tol: f64,
    instances: Vec<Instance>,
    opts: &TheoryOptions,
) -> Result<AxiomReport> {
    let samples = instances
        .into_iter()
        .map(|instance| {
            let d = deviation(axiom, theory, &instance, opts)?;
            Ok(Witness {
                instance,
                deviation: d,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AxiomReport::from_equality(axiom, theory, tol, samples))
}

/// `max_j |sum_i S_ij rho_ii - (U rho U^dag)_jj|`.
pub fn check_marginalization(
    theory: Theory,
    rho: &DensityMatrix,
    u: &UnitaryMatrix,
    tol: f64,
    opts: &TheoryOptions,
) -> Result<AxiomReport> {
    let instance = Instance::Single {
        rho: rho.clone(),
        u: u.clone(),
    };
    equality_report(Axiom::Marginalization, theory, tol, vec![instance], opts)
}

/// Compares `S` of a relabeled instance with the relabeled `S`. When
/// `n_perms` is at least `N!` every permutation is tried; otherwise `n_perms`
/// seeded random ones.
pub fn check_symmetry(
    theory: Theory,
    rho: &DensityMatrix,
    u: &UnitaryMatrix,
    n_perms: usize,
    seed: u64,
    tol: f64,
    opts: &TheoryOptions,
) -> Result<AxiomReport> {
    let n = rho.dim();
    let all = n <= 8 && (1..=n).product::<usize>() <= n_perms;
    let perms: Vec<Vec<usize>> = if all {
        (0..n).permutations(n).collect()
    } else {
        let mut r = rng(seed);
        (0..n_perms)
            .map(|_| random_permutation(n, &mut r))
            .collect()
    };
    let instances = perms
        .into_iter()
        .map(|perm| Instance::Relabeled {
            rho: rho.clone(),
            u: u.clone(),
            perm,
        })
        .collect();
    equality_report(Axiom::Symmetry, theory, tol, instances, opts)
}

/// Largest `S` entry between different minimal blocks.
pub fn check_indifference(
    theory: Theory,
    rho: &DensityMatrix,
    u: &UnitaryMatrix,
    tol: f64,
    opts: &TheoryOptions,
) -> Result<AxiomReport> {
    let instance = Instance::Single {
        rho: rho.clone(),
        u: u.clone(),
    };
    equality_report(Axiom::Indifference, theory, tol, vec![instance], opts)
}

fn perturbed_state(rho: &DensityMatrix, delta: f64, seed: u64) -> Result<DensityMatrix> {
    if delta == 0.0 {
        return Ok(rho.clone());
    }
    let sigma = random_density(rho.dim(), seed, rho.dim())?;
    DensityMatrix::mixture(&[(1.0 - delta, rho.clone()), (delta, sigma)])
}

fn robustness_report(
    axiom: Axiom,
    theory: Theory,
    dim: usize,
    delta: f64,
    instances: Vec<Instance>,
    opts: &TheoryOptions,
) -> Result<AxiomReport> {
    let bound = robustness_bound(dim, delta);
    let samples = instances
        .into_iter()
        .map(|instance| {
            let d = deviation(axiom, theory, &instance, opts)?;
            Ok(Witness {
                instance,
                deviation: d,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let trials = samples.len();
    let worst = worst_of(samples);
    let max_deviation = worst.as_ref().map_or(0.0, |w| w.deviation);
    let verdict = if theory == Theory::Schrodinger {
        Verdict::ProbeOnly
    } else if max_deviation <= bound {
        Verdict::HoldsOnSuite
    } else {
        Verdict::Violated
    };
    let mut report = AxiomReport {
        axiom,
        theory,
        verdict,
        witnesses: worst.into_iter().collect(),
        max_deviation,
        tolerance: bound,
        trials,
        measurements: Default::default(),
    };
    report.measurements.insert("delta".into(), delta);
    Ok(report)
}

/// Largest `|P(rho~, U~) - P(rho, U)|` entry over `trials` perturbations with
/// `U~ = U exp(i delta H)` and `rho~ = (1 - delta) rho + delta sigma`. The
/// Schrödinger theory is only probed; the others are held to
/// [`robustness_bound`].
pub fn probe_robustness(
    theory: Theory,
    rho: &DensityMatrix,
    u: &UnitaryMatrix,
    delta: f64,
    trials: usize,
    seed: u64,
    opts: &TheoryOptions,
) -> Result<AxiomReport> {
    let instances = (0..trials as u64)
        .map(|t| {
            Ok(Instance::Perturbed {
                rho: rho.clone(),
                u: u.clone(),
                rho_tilde: perturbed_state(rho, delta, derive_seed(seed, 2 * t + 1))?,
                u_tilde: perturb_unitary(u, delta, derive_seed(seed, 2 * t)),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    robustness_report(Axiom::Robustness, theory, rho.dim(), delta, instances, opts)
}

/// As [`probe_robustness`] but the perturbation of `U` only mixes inputs
/// inside each minimal block, so `U~` has the same blocks.
pub fn check_block_robustness(
    theory: Theory,
    rho: &DensityMatrix,
    u: &UnitaryMatrix,
    delta: f64,
    trials: usize,
    seed: u64,
    opts: &TheoryOptions,
) -> Result<AxiomReport> {
    let groups = minimal_blocks(u, opts.zero_tol)?.input_groups();
    let instances = (0..trials as u64)
        .map(|t| {
            let u_tilde = perturb_unitary_within(u, delta, derive_seed(seed, 2 * t), &groups);
            if !same_blocks(u, &u_tilde, opts.zero_tol)? {
                return Err(Error::Internal(
                    "block-preserving perturbation changed the minimal blocks".into(),
                ));
            }
            Ok(Instance::Perturbed {
                rho: rho.clone(),
                u: u.clone(),
                rho_tilde: perturbed_state(rho, delta, derive_seed(seed, 2 * t + 1))?,
                u_tilde,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    robustness_report(
        Axiom::BlockRobustness,
        theory,
        rho.dim(),
        delta,
        instances,
        opts,
    )
}

fn bipartite(
    rho: &DensityMatrix,
    u_a: &UnitaryMatrix,
    u_b: &UnitaryMatrix,
    dims: (usize, usize),
) -> Result<Instance> {
    let (da, db) = dims;
    crate::qcore::check_dims(da, u_a.dim())?;
    crate::qcore::check_dims(db, u_b.dim())?;
    crate::qcore::check_dims(da * db, rho.dim())?;
    Ok(Instance::Bipartite {
        rho: rho.clone(),
        u_a: u_a.clone(),
        u_b: u_b.clone(),
        dims,
    })
}

/// Compares `S(U_A rho U_A^dag, U_B) S(rho, U_A)` with the product in the
/// other order. `U_A` acts on the first factor of `dims`.
pub fn check_commutativity(
    theory: Theory,
    rho_ab: &DensityMatrix,
    u_a: &UnitaryMatrix,
    u_b: &UnitaryMatrix,
    dims: (usize, usize),
    tol: f64,
    opts: &TheoryOptions,
) -> Result<AxiomReport> {
    let instance = bipartite(rho_ab, u_a, u_b, dims)?;
    equality_report(Axiom::Commutativity, theory, tol, vec![instance], opts)
}

pub fn check_product_commutativity(
    theory: Theory,
    psi_a: &[crate::qcore::Complex64],
    psi_b: &[crate::qcore::Complex64],
    u_a: &UnitaryMatrix,
    u_b: &UnitaryMatrix,
    tol: f64,
    opts: &TheoryOptions,
) -> Result<AxiomReport> {
    let rho = super::instances::product_state(psi_a, psi_b);
    let instance = bipartite(&rho, u_a, u_b, (psi_a.len(), psi_b.len()))?;
    equality_report(
        Axiom::ProductCommutativity,
        theory,
        tol,
        vec![instance],
        opts,
    )
}

/// Compares `S(rho, U)` with `sum_k p_k S(psi_k, U)`. The decomposition has to
/// reproduce `rho` within `1e-9`.
pub fn check_decomposition_invariance(
    theory: Theory,
    rho: &DensityMatrix,
    parts: &[(f64, DensityMatrix)],
    u: &UnitaryMatrix,
    tol: f64,
    opts: &TheoryOptions,
) -> Result<AxiomReport> {
    let mix = DensityMatrix::mixture(parts)?;
    let gap = mix.matrix().max_abs_diff(rho.matrix());
    if gap > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "decomposition differs from the state by {gap:.3e}"
        )));
    }
    let instance = Instance::Decomposition {
        parts: parts.to_vec(),
        u: u.clone(),
    };
    equality_report(
        Axiom::DecompositionInvariance,
        theory,
        tol,
        vec![instance],
        opts,
    )
}

/// Compares `S(rho, WV)` with `S(V rho V^dag, W) S(rho, V)`. When `V` sends
/// `rho` to a basis state the chained matrix is also compared with the
/// product theory on `WV`, recorded as `basis_case_product_deviation`.
pub fn check_time_slicing(
    theory: Theory,
    rho: &DensityMatrix,
    v: &UnitaryMatrix,
    w: &UnitaryMatrix,
    tol: f64,
    opts: &TheoryOptions,
) -> Result<AxiomReport> {
    let instance = Instance::Sliced {
        rho: rho.clone(),
        v: v.clone(),
        w: w.clone(),
    };
    let mut report = equality_report(Axiom::TimeSlicing, theory, tol, vec![instance], opts)?;
    let mid = evolve(rho, v)?;
    if mid.populations().iter().any(|&p| p >= 1.0 - 1e-12) {
        let chain = chained(theory, rho, v, w, opts)?;
        let product = stochastic_of(Theory::Product, rho, &v.compose(w)?, opts)?;
        report.measurements.insert(
            "basis_case_product_deviation".into(),
            chain.max_abs_diff(&product),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::axioms::instances::*;
    use crate::axioms::EQUALITY_TOL;
    use crate::qcore::{phi_state, random_unitary, rotation};

    fn opts() -> TheoryOptions {
        TheoryOptions::default()
    }

    #[test]
    fn marginalization_examples() {
        let rho = DensityMatrix::maximally_mixed(2);
        let u = rotation(PI / 8.0);
        let r = check_marginalization(Theory::Product, &rho, &u, 1e-9, &opts()).unwrap();
        assert!(r.max_deviation <= 1e-12);
        let r = check_marginalization(Theory::Schrodinger, &rho, &u, 1e-8, &opts()).unwrap();
        assert!(r.max_deviation <= 1e-10);
        assert_eq!(r.verdict, Verdict::HoldsOnSuite);
    }

    #[test]
    fn symmetry_under_all_relabelings() {
        let rho = DensityMatrix::maximally_mixed(2);
        let r =
            check_symmetry(Theory::Flow, &rho, &rotation(PI / 4.0), 2, 0, 1e-9, &opts()).unwrap();
        assert_eq!(r.trials, 2);
        assert_eq!(r.verdict, Verdict::HoldsOnSuite);
        let rho = random_density(3, 8, 2).unwrap();
        let r = check_symmetry(
            Theory::Schrodinger,
            &rho,
            &random_unitary(3, 9),
            6,
            0,
            EQUALITY_TOL,
            &opts(),
        )
        .unwrap();
        assert_eq!(r.trials, 6);
        assert_eq!(r.verdict, Verdict::HoldsOnSuite);
    }

    #[test]
    fn product_theory_is_not_indifferent() {
        let (rho, u) = tensor_witness();
        let r = check_indifference(Theory::Product, &rho, &u, EQUALITY_TOL, &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Violated);
        assert!(r.max_deviation >= 0.1);
        let w = &r.witnesses[0];
        assert_eq!(
            w.recheck(Axiom::Indifference, Theory::Product, &opts())
                .unwrap(),
            w.deviation
        );
        let r = check_indifference(Theory::Flow, &rho, &u, 1e-9, &opts()).unwrap();
        assert!(r.max_deviation <= 1e-9);
    }

    #[test]
    fn dieks_is_indifferent_on_three_level_example() {
        let r = check_indifference(
            Theory::Dieks,
            &strong_continuity_state(0.1, 1.0),
            &strong_continuity_unitary(),
            EQUALITY_TOL,
            &opts(),
        )
        .unwrap();
        assert_eq!(r.max_deviation, 0.0);
    }

    #[test]
    fn zero_perturbation_changes_nothing() {
        let rho = random_density(3, 1, 3).unwrap();
        let u = random_unitary(3, 2);
        for t in [Theory::Flow, Theory::Schrodinger] {
            let r = probe_robustness(t, &rho, &u, 0.0, 3, 5, &opts()).unwrap();
            assert_eq!(r.max_deviation, 0.0);
            let r = check_block_robustness(t, &rho, &u, 0.0, 3, 5, &opts()).unwrap();
            assert_eq!(r.max_deviation, 0.0);
        }
    }

    #[test]
    fn flow_robust_on_quarter_rotation() {
        let r = probe_robustness(
            Theory::Flow,
            &DensityMatrix::maximally_mixed(2),
            &rotation(PI / 4.0),
            1e-3,
            50,
            11,
            &opts(),
        )
        .unwrap();
        assert!(r.max_deviation <= 0.032, "{}", r.max_deviation);
        assert_eq!(r.verdict, Verdict::HoldsOnSuite);
    }

    #[test]
    fn dieks_jumps_when_blocks_merge() {
        let r = probe_robustness(
            Theory::Dieks,
            &DensityMatrix::maximally_mixed(2),
            &UnitaryMatrix::identity(2),
            1e-3,
            5,
            3,
            &opts(),
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Violated);
        assert!(r.max_deviation > 0.2);
    }

    #[test]
    fn block_robust_dieks_and_probe_only_schrodinger() {
        let rho = strong_continuity_state(0.1, 1.0);
        let u = strong_continuity_unitary();
        let r = check_block_robustness(Theory::Dieks, &rho, &u, 1e-3, 50, 1, &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::HoldsOnSuite);
        let r =
            check_block_robustness(Theory::Schrodinger, &rho, &u, 1e-3, 50, 1, &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::ProbeOnly);
        assert!(r.max_deviation.is_finite());
    }

    #[test]
    fn bell_instance_breaks_commutativity() {
        let ua = rotation(PI / 8.0);
        let ub = rotation(-PI / 8.0);
        for t in [Theory::Flow, Theory::Schrodinger, Theory::Dieks] {
            let r =
                check_commutativity(t, &bell(), &ua, &ub, (2, 2), EQUALITY_TOL, &opts()).unwrap();
            assert_eq!(r.verdict, Verdict::Violated, "{t}");
        }
        let r =
            check_commutativity(Theory::Product, &bell(), &ua, &ub, (2, 2), 1e-9, &opts()).unwrap();
        assert!(r.max_deviation <= 1e-9);
    }

    #[test]
    fn product_commutativity_examples() {
        let (a, b, ua, ub) = product_commutativity_witness();
        let r = check_product_commutativity(
            Theory::Schrodinger,
            &a,
            &b,
            &ua,
            &ub,
            EQUALITY_TOL,
            &opts(),
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::HoldsOnSuite, "{}", r.max_deviation);
        let r = check_product_commutativity(Theory::Flow, &a, &b, &ua, &ub, EQUALITY_TOL, &opts())
            .unwrap();
        assert_eq!(r.verdict, Verdict::Violated);
        let r =
            check_product_commutativity(Theory::Product, &a, &b, &ua, &ub, 1e-9, &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::HoldsOnSuite);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let err = check_commutativity(
            Theory::Product,
            &bell(),
            &rotation(0.1),
            &UnitaryMatrix::identity(3),
            (2, 3),
            EQUALITY_TOL,
            &opts(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn decomposition_examples() {
        let parts = phi_pair_decomposition();
        let mixed = DensityMatrix::maximally_mixed(2);
        let r = check_decomposition_invariance(
            Theory::Flow,
            &mixed,
            &parts,
            &rotation(PI / 4.0),
            EQUALITY_TOL,
            &opts(),
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Violated);
        let r = check_decomposition_invariance(
            Theory::Schrodinger,
            &mixed,
            &parts,
            &rotation(PI / 8.0),
            EQUALITY_TOL,
            &opts(),
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Violated);
        let pure = phi_state(0.3);
        let r = check_decomposition_invariance(
            Theory::Product,
            &pure,
            &[(1.0, pure.clone())],
            &rotation(0.2),
            0.0,
            &opts(),
        )
        .unwrap();
        assert_eq!(r.max_deviation, 0.0);
        assert!(check_decomposition_invariance(
            Theory::Product,
            &pure,
            &parts,
            &rotation(0.2),
            0.0,
            &opts()
        )
        .is_err());
    }

    #[test]
    fn dieks_decomposition_fails_across_blocks() {
        // Two components with different masses in the two blocks of R (+) R.
        let r8 = rotation(PI / 8.0);
        let u = UnitaryMatrix::new(
            crate::qcore::ComplexMatrix::from_fn(4, |row, col| {
                if row / 2 == col / 2 {
                    r8.matrix().get(row % 2, col % 2)
                } else {
                    Default::default()
                }
            }),
            1e-12,
        )
        .unwrap();
        let psi1 = DensityMatrix::pure_real(&[0.9f64.sqrt(), 0.0, 0.1f64.sqrt(), 0.0]).unwrap();
        let psi2 = DensityMatrix::pure_real(&[0.0, 0.1f64.sqrt(), 0.0, 0.9f64.sqrt()]).unwrap();
        let parts = vec![(0.5, psi1), (0.5, psi2)];
        let rho = DensityMatrix::mixture(&parts).unwrap();
        let r =
            check_decomposition_invariance(Theory::Dieks, &rho, &parts, &u, EQUALITY_TOL, &opts())
                .unwrap();
        assert_eq!(r.verdict, Verdict::Violated);
    }

    #[test]
    fn time_slicing_examples() {
        let (rho, v, w) = time_slicing_witness();
        let r = check_time_slicing(Theory::Flow, &rho, &v, &w, EQUALITY_TOL, &opts()).unwrap();
        assert!(r.measurements["basis_case_product_deviation"] <= 1e-9);
        assert_eq!(r.verdict, Verdict::Violated);
        let r = check_time_slicing(Theory::Product, &rho, &v, &w, 1e-9, &opts()).unwrap();
        assert!(r.max_deviation <= 1e-9);
        let r = check_time_slicing(
            Theory::Schrodinger,
            &phi_state(PI / 8.0),
            &rotation(PI / 16.0),
            &rotation(PI / 16.0),
            EQUALITY_TOL,
            &opts(),
        )
        .unwrap();
        assert!(r.max_deviation > 0.0);
    }

    #[test]
    fn witnesses_serialize_and_recheck() {
        let (a, b, ua, ub) = product_commutativity_witness();
        let r = check_product_commutativity(Theory::Flow, &a, &b, &ua, &ub, EQUALITY_TOL, &opts())
            .unwrap();
        let json = serde_json::to_string(&r).unwrap();
        let back: AxiomReport = serde_json::from_str(&json).unwrap();
        let d = back.witnesses[0]
            .recheck(Axiom::ProductCommutativity, Theory::Flow, &opts())
            .unwrap();
        assert_eq!(d, r.max_deviation);
    }
}

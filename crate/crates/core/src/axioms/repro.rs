use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::qcore::{evolve, phi_state, rotation, DensityMatrix, RealMatrix};
use crate::theories::{Theory, TheoryOptions};

use super::instances::{
    bell, nogo_u_a, nogo_u_b, strong_continuity_state, strong_continuity_unitary,
};
use super::{joint_of, stochastic_of};

const INDIFFERENT: [Theory; 3] = [Theory::Dieks, Theory::Flow, Theory::Schrodinger];

/// Basis index of `|10>` in the two-qubit basis `|00>, |01>, |10>, |11>`.
const TEN: usize = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NogoRow {
    pub theory: Theory,
    /// `Pr[v0 = |00>, v2 = |10>]` with `U_A` applied first.
    pub pr_e_a_first: f64,
    pub pr_e_b_first: f64,
    pub pr_v2_a_first: f64,
    pub pr_v2_b_first: f64,
    pub v0_marginal: Vec<f64>,
    pub within_bounds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NogoReport {
    /// `sin^2(pi/8) / 2`, the largest `Pr[E]` compatible with indifference
    /// when `U_A` comes first.
    pub a_first_upper: f64,
    /// `1/4 - sin^2(pi/8) / 2`, the smallest `Pr[E]` when `U_B` comes first.
    pub b_first_lower: f64,
    pub rows: Vec<NogoRow>,
}

impl NogoReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.within_bounds)
    }
}

/// Distribution of `v2` given `v0`, chaining the two one-step matrices.
fn two_step(
    theory: Theory,
    rho: &DensityMatrix,
    first: &crate::qcore::UnitaryMatrix,
    second: &crate::qcore::UnitaryMatrix,
    opts: &TheoryOptions,
) -> Result<RealMatrix> {
    let s1 = stochastic_of(theory, rho, first, opts)?;
    let s2 = stochastic_of(theory, &evolve(rho, first)?, second, opts)?;
    s2.mul(&s1)
}

/// Exact trajectory probabilities on the Bell state with `R(pi/8)` on the
/// first qubit and `R(-pi/8)` on the second, in both orders.
pub fn repro_nogo(opts: &TheoryOptions) -> Result<NogoReport> {
    let s2 = (PI / 8.0).sin().powi(2);
    let a_first_upper = 0.5 * s2;
    let b_first_lower = 0.25 - 0.5 * s2;
    let rho = bell();
    let (ua, ub) = (nogo_u_a(), nogo_u_b());
    let p0 = rho.populations();
    let mut rows = Vec::new();
    for theory in INDIFFERENT {
        let a = two_step(theory, &rho, &ua, &ub, opts)?;
        let b = two_step(theory, &rho, &ub, &ua, &opts.clone())?;
        let pr_e_a_first = p0[0] * a.transition(0, TEN);
        let pr_e_b_first = p0[0] * b.transition(0, TEN);
        let v2 = |m: &RealMatrix| (0..4).map(|i| p0[i] * m.transition(i, TEN)).sum::<f64>();
        rows.push(NogoRow {
            theory,
            pr_e_a_first,
            pr_e_b_first,
            pr_v2_a_first: v2(&a),
            pr_v2_b_first: v2(&b),
            v0_marginal: p0.clone(),
            within_bounds: pr_e_a_first <= a_first_upper + 1e-6
                && pr_e_b_first >= b_first_lower - 1e-6,
        });
    }
    Ok(NogoReport {
        a_first_upper,
        b_first_lower,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForcedRow {
    pub theory: Theory,
    /// `S(phi(-theta), R(theta))`, forced to `[[1,1],[0,0]]`.
    pub s_to_zero: RealMatrix,
    /// `S(phi(pi/2 - theta), R(theta))`, forced to `[[0,0],[1,1]]`.
    pub s_to_one: RealMatrix,
    pub forced_deviation: f64,
    /// `S(I/2, R(theta))` and its distance from the all-`1/2` matrix that
    /// decomposition invariance would force.
    pub s_mixed: RealMatrix,
    pub distance_from_uniform: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRow {
    pub theory: Theory,
    /// `(P)_{0->1}` predicted from the decomposition into `|0>, |1>`.
    pub p01_computational: f64,
    /// `(P)_{0->1}` predicted from the decomposition into
    /// `phi(pi/8), phi(5pi/8)`.
    pub p01_phi: f64,
    /// `(P(I/2, R(pi/8)))_{0->1}` itself.
    pub p01_actual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompReport {
    pub theta: f64,
    pub forced: Vec<ForcedRow>,
    /// `sin^2(pi/8) / 2`.
    pub computational_value: f64,
    /// `(1/2 - sin^2(pi/8)) / 2`.
    pub phi_lower_bound: f64,
    pub pairs: Vec<PairRow>,
    /// `S_FT(I/2, R(pi/4))`, the identity rather than all `1/2`.
    pub flow_quarter_rotation: RealMatrix,
}

impl DecompReport {
    pub fn passed(&self) -> bool {
        self.forced.iter().all(|r| r.forced_deviation <= 1e-7)
            && self.phi_lower_bound > self.computational_value
            && self.pairs.iter().all(|r| {
                (r.p01_computational - self.computational_value).abs() <= 1e-7
                    && r.p01_phi >= self.phi_lower_bound - 1e-7
            })
            && self
                .flow_quarter_rotation
                .max_abs_diff(&RealMatrix::identity(2))
                <= 1e-9
    }
}

pub fn repro_decomp(opts: &TheoryOptions) -> Result<DecompReport> {
    let theta = PI / 8.0;
    let r = rotation(theta);
    let to_zero = RealMatrix::from_rows(&[&[1.0, 1.0], &[0.0, 0.0]]);
    let to_one = RealMatrix::from_rows(&[&[0.0, 0.0], &[1.0, 1.0]]);
    let uniform = RealMatrix::from_fn(2, |_, _| 0.5);
    let mixed = DensityMatrix::maximally_mixed(2);
    let mut forced = Vec::new();
    let mut pairs = Vec::new();
    for theory in Theory::ALL {
        let s_to_zero = stochastic_of(theory, &phi_state(-theta), &r, opts)?;
        let s_to_one = stochastic_of(theory, &phi_state(PI / 2.0 - theta), &r, opts)?;
        let s_mixed = stochastic_of(theory, &mixed, &r, opts)?;
        forced.push(ForcedRow {
            theory,
            forced_deviation: s_to_zero
                .max_abs_diff(&to_zero)
                .max(s_to_one.max_abs_diff(&to_one)),
            distance_from_uniform: s_mixed.max_abs_diff(&uniform),
            s_to_zero,
            s_to_one,
            s_mixed,
        });

        let p01 = |rho: &DensityMatrix| -> Result<f64> {
            Ok(joint_of(theory, rho, &r, opts)?.transition(0, 1))
        };
        pairs.push(PairRow {
            theory,
            p01_computational: 0.5 * p01(&DensityMatrix::basis(2, 0))?
                + 0.5 * p01(&DensityMatrix::basis(2, 1))?,
            p01_phi: 0.5 * p01(&phi_state(PI / 8.0))? + 0.5 * p01(&phi_state(5.0 * PI / 8.0))?,
            p01_actual: p01(&mixed)?,
        });
    }
    let s2 = (PI / 8.0).sin().powi(2);
    Ok(DecompReport {
        theta,
        forced,
        computational_value: 0.5 * s2,
        phi_lower_bound: 0.5 * (0.5 - s2),
        pairs,
        flow_quarter_rotation: stochastic_of(Theory::Flow, &mixed, &rotation(PI / 4.0), opts)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrongContinuityRow {
    pub delta: f64,
    pub theory: Theory,
    pub s: RealMatrix,
    pub s_tilde: RealMatrix,
    pub matches_displayed: bool,
    /// Max-entry distance between the two stochastic matrices.
    pub s_jump: f64,
    /// Max-entry distance between the two joint matrices.
    pub p_jump: f64,
    /// Max-entry distance between the two density matrices.
    pub rho_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrongContinuityReport {
    pub rows: Vec<StrongContinuityRow>,
}

impl StrongContinuityReport {
    pub fn passed(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.matches_displayed && (r.s_jump - 1.0).abs() <= 1e-9)
    }
}

/// The three-level instance whose two nearby states `(a, delta, delta)` and
/// `(a, delta, -delta)` send the small block to different outputs.
pub fn repro_strong_continuity(opts: &TheoryOptions) -> Result<StrongContinuityReport> {
    let u = strong_continuity_unitary();
    let first = RealMatrix::from_rows(&[&[1.0, 0.0, 0.0], &[0.0, 0.0, 0.0], &[0.0, 1.0, 1.0]]);
    let second = RealMatrix::from_rows(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 1.0], &[0.0, 0.0, 0.0]]);
    let mut rows = Vec::new();
    for delta in [0.1, 0.01, 0.001] {
        let rho = strong_continuity_state(delta, 1.0);
        let rho_tilde = strong_continuity_state(delta, -1.0);
        for theory in INDIFFERENT {
            let s = stochastic_of(theory, &rho, &u, opts)?;
            let s_tilde = stochastic_of(theory, &rho_tilde, &u, opts)?;
            let p_jump = joint_of(theory, &rho, &u, opts)?
                .max_abs_diff(&joint_of(theory, &rho_tilde, &u, opts)?);
            rows.push(StrongContinuityRow {
                delta,
                theory,
                matches_displayed: s.max_abs_diff(&first) <= 1e-9
                    && s_tilde.max_abs_diff(&second) <= 1e-9,
                s_jump: s.max_abs_diff(&s_tilde),
                p_jump,
                rho_distance: rho.matrix().max_abs_diff(rho_tilde.matrix()),
                s,
                s_tilde,
            });
        }
    }
    Ok(StrongContinuityReport { rows })
}

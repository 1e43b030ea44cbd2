//! Flow networks built from a state and a unitary.
//!
//! The network has a source `s`, one vertex per input basis state, one per
//! output basis state and a sink `t`. Edges `s -> i` carry capacity
//! `rho_ii`, edges `i -> j` carry `|U_ji|` and edges `j -> t` carry
//! `(U rho U^dag)_jj`. A unit of flow always fits through it; the flow theory
//! picks one canonical maximum flow by maximizing the middle edges one at a
//! time in lexicographic order.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{check_dims, evolve, DensityMatrix, RealMatrix, UnitaryMatrix};

/// Residual capacities at or below this are treated as saturated.
const RESIDUAL_EPS: f64 = 1e-13;
/// Reported flows below this are clamped to zero.
pub const FLOW_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowNetwork {
    dim: usize,
    source_caps: Vec<f64>,
    /// Row = output, column = input.
    middle_caps: RealMatrix,
    sink_caps: Vec<f64>,
}

impl FlowNetwork {
    pub fn new(
        source_caps: Vec<f64>,
        middle_caps: RealMatrix,
        sink_caps: Vec<f64>,
    ) -> Result<Self> {
        let dim = source_caps.len();
        check_dims(dim, middle_caps.dim())?;
        check_dims(dim, sink_caps.len())?;
        let negative = source_caps
            .iter()
            .chain(sink_caps.iter())
            .any(|&c| c < 0.0 || !c.is_finite())
            || middle_caps.min() < 0.0;
        if negative {
            return Err(Error::InvalidParameter(
                "negative or non-finite capacity".into(),
            ));
        }
        for caps in [&source_caps, &sink_caps] {
            let sum: f64 = caps.iter().sum();
            if (sum - 1.0).abs() > 1e-9 {
                return Err(Error::BadProbabilities { sum });
            }
        }
        Ok(Self {
            dim,
            source_caps,
            middle_caps,
            sink_caps,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn source_caps(&self) -> &[f64] {
        &self.source_caps
    }

    pub fn sink_caps(&self) -> &[f64] {
        &self.sink_caps
    }

    pub fn middle_caps(&self) -> &RealMatrix {
        &self.middle_caps
    }

    pub fn capacity(&self, input: usize, output: usize) -> f64 {
        self.middle_caps.transition(input, output)
    }

    /// The network of the relabeled problem: new vertex `k` is old vertex
    /// `perm[k]` on both sides.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        Self {
            dim: self.dim,
            source_caps: perm.iter().map(|&k| self.source_caps[k]).collect(),
            middle_caps: self.middle_caps.relabel(perm),
            sink_caps: perm.iter().map(|&k| self.sink_caps[k]).collect(),
        }
    }
}

pub fn build_network(rho: &DensityMatrix, u: &UnitaryMatrix) -> Result<FlowNetwork> {
    check_dims(rho.dim(), u.dim())?;
    let out = evolve(rho, u)?;
    FlowNetwork::new(rho.populations(), u.matrix().abs(), out.populations())
}

/// Same network but with middle capacities `|U_ji|^2`. One unit of flow does
/// not always fit through this one.
pub fn squared_capacity_network(rho: &DensityMatrix, u: &UnitaryMatrix) -> Result<FlowNetwork> {
    let net = build_network(rho, u)?;
    let squared = net.middle_caps.map(|c| c * c);
    FlowNetwork::new(net.source_caps, squared, net.sink_caps)
}

/// Flow on the middle edges, row = output, column = input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FlowMatrix(RealMatrix);

impl FlowMatrix {
    pub fn from_matrix(m: RealMatrix) -> Self {
        Self(m)
    }

    pub fn flow(&self, input: usize, output: usize) -> f64 {
        self.0.transition(input, output)
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_matrix(&self) -> &RealMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> RealMatrix {
        self.0
    }

    pub fn value(&self) -> f64 {
        self.0.row_sums().iter().sum()
    }
}

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: f64,
    flow: f64,
}

/// Residual graph over the fixed three-layer topology. Arc `k` and `k ^ 1`
/// are a forward arc and its reverse.
struct Residual {
    dim: usize,
    arcs: Vec<Arc>,
    adj: Vec<Vec<usize>>,
    frozen: Vec<bool>,
}

impl Residual {
    fn source(&self) -> usize {
        0
    }

    fn sink(&self) -> usize {
        2 * self.dim + 1
    }

    fn input(&self, i: usize) -> usize {
        1 + i
    }

    fn output(&self, j: usize) -> usize {
        1 + self.dim + j
    }

    fn new(net: &FlowNetwork) -> Self {
        let n = net.dim;
        let mut g = Residual {
            dim: n,
            arcs: Vec::with_capacity(2 * (n * n + 2 * n)),
            adj: vec![Vec::new(); 2 * n + 2],
            frozen: Vec::new(),
        };
        for i in 0..n {
            g.add_arc(g.source(), g.input(i), net.source_caps[i]);
        }
        // Middle arcs in lexicographic order: arc id of (i, j) is
        // 2 * (n + i * n + j).
        for i in 0..n {
            for j in 0..n {
                g.add_arc(g.input(i), g.output(j), net.capacity(i, j));
            }
        }
        for j in 0..n {
            g.add_arc(g.output(j), g.sink(), net.sink_caps[j]);
        }
        g.frozen = vec![false; g.arcs.len() / 2];
        g
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: f64) {
        let k = self.arcs.len();
        self.arcs.push(Arc { to, cap, flow: 0.0 });
        self.arcs.push(Arc {
            to: from,
            cap: 0.0,
            flow: 0.0,
        });
        self.adj[from].push(k);
        self.adj[to].push(k + 1);
    }

    fn middle_arc(&self, i: usize, j: usize) -> usize {
        2 * (self.dim + i * self.dim + j)
    }

    fn residual(&self, k: usize) -> f64 {
        self.arcs[k].cap - self.arcs[k].flow
    }

    fn push(&mut self, k: usize, amount: f64) {
        self.arcs[k].flow += amount;
        self.arcs[k ^ 1].flow -= amount;
    }

    /// Shortest augmenting paths from `from` to `to`, pushing at most `limit`.
    fn augment(&mut self, from: usize, to: usize, limit: f64) -> f64 {
        let mut pushed = 0.0;
        let nodes = self.adj.len();
        let mut pred = vec![usize::MAX; nodes];
        while limit - pushed > RESIDUAL_EPS {
            pred.iter_mut().for_each(|p| *p = usize::MAX);
            let mut seen = vec![false; nodes];
            seen[from] = true;
            let mut queue = VecDeque::from([from]);
            'bfs: while let Some(v) = queue.pop_front() {
                for &k in &self.adj[v] {
                    let w = self.arcs[k].to;
                    if seen[w] || self.frozen[k / 2] || self.residual(k) <= RESIDUAL_EPS {
                        continue;
                    }
                    seen[w] = true;
                    pred[w] = k;
                    if w == to {
                        break 'bfs;
                    }
                    queue.push_back(w);
                }
            }
            if !seen[to] {
                break;
            }
            let mut bottleneck = limit - pushed;
            let mut v = to;
            while v != from {
                let k = pred[v];
                bottleneck = bottleneck.min(self.residual(k));
                v = self.arcs[k ^ 1].to;
            }
            let mut v = to;
            while v != from {
                let k = pred[v];
                self.push(k, bottleneck);
                v = self.arcs[k ^ 1].to;
            }
            pushed += bottleneck;
        }
        pushed
    }

    fn max_flow(&mut self) -> f64 {
        self.augment(self.source(), self.sink(), f64::INFINITY)
    }

    /// Raises each middle arc to its largest value given the arcs before it,
    /// by routing cycles `j -> ... -> i` through the arc `i -> j` and then
    /// freezing it.
    fn lexicographic_refine(&mut self) {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let k = self.middle_arc(i, j);
                let room = self.residual(k);
                self.frozen[k / 2] = true;
                if room > RESIDUAL_EPS {
                    let (head, tail) = (self.output(j), self.input(i));
                    let extra = self.augment(head, tail, room);
                    self.push(k, extra);
                }
            }
        }
    }

    fn flow_matrix(&self) -> FlowMatrix {
        let n = self.dim;
        let mut m = RealMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let f = self.arcs[self.middle_arc(i, j)].flow;
                m.set(j, i, if f < FLOW_FLOOR { 0.0 } else { f });
            }
        }
        FlowMatrix(m)
    }
}

/// Any maximum flow and its value.
pub fn max_flow(net: &FlowNetwork) -> (FlowMatrix, f64) {
    let mut g = Residual::new(net);
    let value = g.max_flow();
    (g.flow_matrix(), value)
}

/// The lexicographically maximal flow of an arbitrary network, maximizing
/// `f(0,0), f(0,1), ..., f(0,N-1), f(1,0), ...` (input index outer) in turn.
pub fn lex_max_flow_network(net: &FlowNetwork) -> FlowMatrix {
    let mut g = Residual::new(net);
    g.max_flow();
    g.lexicographic_refine();
    g.flow_matrix()
}

pub fn lex_max_flow(rho: &DensityMatrix, u: &UnitaryMatrix) -> Result<FlowMatrix> {
    Ok(lex_max_flow_network(&build_network(rho, u)?))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    use super::*;
    use crate::qcore::{phi_state, plus_state, rotation};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn network_for_plus_under_quarter_rotation() {
        let net = build_network(&plus_state(), &rotation(PI / 4.0)).unwrap();
        assert!(close(net.source_caps()[0], 0.5, 1e-15) && close(net.source_caps()[1], 0.5, 1e-15));
        for i in 0..2 {
            for j in 0..2 {
                assert!(close(net.capacity(i, j), FRAC_1_SQRT_2, 1e-15));
            }
        }
        assert!(close(net.sink_caps()[0], 0.0, 1e-15) && close(net.sink_caps()[1], 1.0, 1e-15));
    }

    #[test]
    fn network_for_identity() {
        let net = build_network(
            &DensityMatrix::maximally_mixed(2),
            &UnitaryMatrix::identity(2),
        )
        .unwrap();
        assert_eq!(net.middle_caps(), &RealMatrix::identity(2));
        assert_eq!(net.sink_caps(), &[0.5, 0.5]);
    }

    #[test]
    fn identity_network_flow_is_diagonal() {
        let net = build_network(
            &DensityMatrix::maximally_mixed(2),
            &UnitaryMatrix::identity(2),
        )
        .unwrap();
        let (f, v) = max_flow(&net);
        assert!(close(v, 1.0, 1e-12));
        assert_eq!(f.as_matrix(), &RealMatrix::identity(2).scale(0.5));
    }

    #[test]
    fn mixed_state_under_quarter_rotation_routes_everything() {
        let net = build_network(&DensityMatrix::maximally_mixed(2), &rotation(PI / 4.0)).unwrap();
        let (_, v) = max_flow(&net);
        assert!(close(v, 1.0, 1e-12));
        let f = lex_max_flow_network(&net);
        assert!(
            f.as_matrix()
                .max_abs_diff(&RealMatrix::identity(2).scale(0.5))
                < 1e-12
        );
    }

    #[test]
    fn lex_flow_under_identity_is_forced() {
        let rho = phi_state(0.3);
        let f = lex_max_flow(&rho, &UnitaryMatrix::identity(2)).unwrap();
        assert!(close(f.flow(0, 0), rho.population(0), 1e-12));
        assert!(close(f.flow(1, 1), rho.population(1), 1e-12));
        assert_eq!(f.flow(0, 1), 0.0);
    }

    #[test]
    fn lex_flow_for_phi_under_quarter_rotation() {
        // phi(pi/8) -> phi(3pi/8): the sink cap of output 0 (cos^2(3pi/8))
        // binds first, and what is left of input 0 exactly fills the
        // 1/sqrt(2) pipe to output 1.
        let f = lex_max_flow(&phi_state(PI / 8.0), &rotation(PI / 4.0)).unwrap();
        let p0 = (PI / 8.0).cos().powi(2);
        let q0 = (3.0 * PI / 8.0).cos().powi(2);
        assert!(close(f.flow(0, 0), q0, 1e-12));
        assert!(close(f.flow(0, 1), p0 - q0, 1e-12));
        assert!(close(f.flow(0, 1), FRAC_1_SQRT_2, 1e-12));
        assert_eq!(f.flow(1, 0), 0.0);
        assert!(close(f.flow(1, 1), 1.0 - p0, 1e-12));
        assert!(close(f.value(), 1.0, 1e-12));
    }

    #[test]
    fn squared_capacities_lose_mass() {
        let net = squared_capacity_network(&plus_state(), &rotation(PI / 8.0)).unwrap();
        let (_, v) = max_flow(&net);
        let expected = 0.5 + 2.0 * (PI / 8.0).sin().powi(2);
        assert!(close(v, expected, 1e-12), "{v}");
        assert!(v < 0.8);
    }

    #[test]
    fn squared_capacities_can_still_carry_everything() {
        // All output mass lands on |1>, and both inputs reach it at 1/2.
        let net = squared_capacity_network(&plus_state(), &rotation(PI / 4.0)).unwrap();
        let (_, v) = max_flow(&net);
        assert!(close(v, 1.0, 1e-12));
    }

    #[test]
    fn rejects_bad_networks() {
        let m = RealMatrix::identity(2);
        assert!(FlowNetwork::new(vec![0.5, 0.6], m.clone(), vec![0.5, 0.5]).is_err());
        assert!(FlowNetwork::new(vec![1.5, -0.5], m.clone(), vec![0.5, 0.5]).is_err());
        assert!(FlowNetwork::new(vec![1.0], m, vec![0.5, 0.5]).is_err());
    }
}

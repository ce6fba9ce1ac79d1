//! Unreduced coined walk over `p · |V|` states, the ground truth for the
//! reduced engine.
//!
//! State `(v, j)` lives at index `v·p + j` and means "at vertex `v`, about
//! to leave along port `j`", where port `j` is the `j`-th entry of `v`'s
//! adjacency list. Crossing an edge lands on the port of the arrival vertex
//! that points back along the same edge (flip-flop shift); a self-loop port
//! maps to itself.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_complex::Complex;
use num_traits::ToPrimitive;

use crate::error::{StructureError, WalkError};
use crate::graph::{build_explicit_graph, ExplicitGraph};
use crate::reduced::{
    build_basis, run_measured_walk, Evolution, HittingSummary, ReducedBasis, ReducedState,
};
use crate::scalar::Real;
use crate::topology::{Direction, Position, WalkTopology};

/// Bijection on full-space indices realizing the shift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftPermutation {
    forward: Vec<usize>,
}

impl ShiftPermutation {
    /// Pairs the `k`-th occurrence of `u` in `adj(v)` with the `k`-th
    /// occurrence of `v` in `adj(u)`.
    pub fn from_graph(graph: &ExplicitGraph, p: usize) -> Self {
        let n = graph.vertex_count();
        let mut slots: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for v in 0..n {
            for (j, &u) in graph.neighbors(v).iter().enumerate() {
                slots.entry((v, u)).or_default().push(j);
            }
        }
        let mut forward = vec![usize::MAX; n * p];
        for v in 0..n {
            let mut seen: HashMap<usize, usize> = HashMap::new();
            for (j, &u) in graph.neighbors(v).iter().enumerate() {
                let k = seen.entry(u).or_insert(0);
                forward[v * p + j] = if u == v {
                    v * p + j
                } else {
                    u * p + slots[&(u, v)][*k]
                };
                *k += 1;
            }
        }
        Self { forward }
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.forward[i]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![usize::MAX; self.forward.len()];
        for (i, &j) in self.forward.iter().enumerate() {
            if j < inv.len() {
                inv[j] = i;
            }
        }
        Self { forward: inv }
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.forward.len()];
        self.forward.iter().all(|&j| {
            j < seen.len() && !std::mem::replace(&mut seen[j], true)
        })
    }

    pub fn fixed_points(&self) -> impl Iterator<Item = usize> + '_ {
        self.forward
            .iter()
            .enumerate()
            .filter(|(i, j)| i == *j)
            .map(|(i, _)| i)
    }
}

/// Full-space walk on a regular graph.
#[derive(Debug, Clone)]
pub struct FullWalk<R> {
    graph: ExplicitGraph,
    topology: Option<WalkTopology>,
    p: usize,
    shift: ShiftPermutation,
    initial: Vec<Complex<R>>,
}

/// Explicit loop-padded walk for `topology`; the target's attachment is
/// pruned for central walks.
pub fn build_full_walk<R: Real>(topology: &WalkTopology) -> Result<FullWalk<R>, WalkError> {
    let padded = topology.clone().with_self_loops(true);
    let graph = build_explicit_graph(&padded, true)?;
    let mut walk = FullWalk::from_graph(graph)?;
    walk.topology = Some(padded);
    Ok(walk)
}

impl<R: Real> FullWalk<R> {
    /// Walk on an arbitrary graph; every vertex must have the same degree.
    pub fn from_graph(graph: ExplicitGraph) -> Result<Self, WalkError> {
        let p = graph.degree(0);
        if let Some(v) = (0..graph.vertex_count()).find(|&v| graph.degree(v) != p) {
            return Err(StructureError::NotRegular {
                vertex: v,
                found: graph.degree(v),
                expected: p,
            }
            .into());
        }
        if graph.start() == graph.target() {
            return Err(WalkError::InvalidParameter("start equals target".into()));
        }
        let shift = ShiftPermutation::from_graph(&graph, p);
        if !shift.is_permutation() {
            return Err(WalkError::NonUnitary {
                deviation: f64::INFINITY,
            });
        }
        let mut initial = vec![Complex::new(R::zero(), R::zero()); graph.vertex_count() * p];
        let amp = R::one() / R::lit(p as f64).sqrt();
        let s = graph.start();
        for a in &mut initial[s * p..(s + 1) * p] {
            *a = Complex::new(amp, R::zero());
        }
        Ok(Self {
            graph,
            topology: None,
            p,
            shift,
            initial,
        })
    }

    pub fn graph(&self) -> &ExplicitGraph {
        &self.graph
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn shift(&self) -> &ShiftPermutation {
        &self.shift
    }

    /// Grover coin on every vertex block: `out = (2/p)Σψ − ψ`.
    pub fn apply_coin(&self, psi: &[Complex<R>], out: &mut [Complex<R>]) {
        let scale = R::lit(2.0) / R::lit(self.p as f64);
        for (block, dst) in psi.chunks(self.p).zip(out.chunks_mut(self.p)) {
            let s = block
                .iter()
                .fold(Complex::new(R::zero(), R::zero()), |a, b| a + b)
                * scale;
            for (o, a) in dst.iter_mut().zip(block) {
                *o = s - a;
            }
        }
    }

    /// Overlaps `⟨J,x,s|ψ⟩` with the reduced basis states, each of which is
    /// the normalized sum of the full states in its class. Requires a graph
    /// built from a topology.
    pub fn project_to_reduced(
        &self,
        psi: &[Complex<R>],
        basis: &ReducedBasis,
    ) -> Result<Vec<Complex<R>>, WalkError> {
        let topology = self.topology.as_ref().ok_or_else(|| {
            WalkError::InvalidParameter("graph carries no collapsed coordinates".into())
        })?;
        let mut out = vec![Complex::new(R::zero(), R::zero()); basis.len()];
        for v in 0..self.graph.vertex_count() {
            let from = self.graph.site(v).expect("topology graphs carry sites");
            for (j, &u) in self.graph.neighbors(v).iter().enumerate() {
                let to = self.graph.site(u).expect("topology graphs carry sites");
                let state = ReducedState {
                    direction: topology.direction_between(from, to),
                    position: from.clone(),
                };
                if let Some(k) = basis.index_of(&state) {
                    out[k] = out[k] + psi[v * self.p + j];
                }
            }
        }
        for (k, state) in basis.states().iter().enumerate() {
            let w = basis.weights().norm_weight(state).to_f64().unwrap_or(f64::INFINITY);
            out[k] = out[k] / R::lit(w.sqrt());
        }
        Ok(out)
    }
}

impl<R: Real> Evolution<R> for FullWalk<R> {
    fn dimension(&self) -> usize {
        self.initial.len()
    }

    fn initial_state(&self) -> Vec<Complex<R>> {
        self.initial.clone()
    }

    fn apply(&self, psi: &[Complex<R>], out: &mut [Complex<R>]) {
        let scale = R::lit(2.0) / R::lit(self.p as f64);
        for (v, block) in psi.chunks(self.p).enumerate() {
            let s = block
                .iter()
                .fold(Complex::new(R::zero(), R::zero()), |a, b| a + b)
                * scale;
            for (j, a) in block.iter().enumerate() {
                out[self.shift.apply(v * self.p + j)] = s - a;
            }
        }
    }

    fn is_target(&self, i: usize) -> bool {
        i / self.p == self.graph.target()
    }
}

/// Measured walk over the full space; same contract as the reduced runner.
pub fn run_full_measured_walk<R: Real>(
    walk: &FullWalk<R>,
    p0: R,
    max_steps: u64,
) -> Result<HittingSummary<R>, WalkError> {
    run_measured_walk(walk, p0, max_steps)
}

/// Multiplicities observed on the explicit graph for one collapsed position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservedWeights {
    pub vertices: BigUint,
    pub ports: [u64; 5],
}

/// Counts vertices and per-vertex ports by direction class on the padded
/// explicit graph. Fails if two vertices at the same position disagree.
pub fn observed_weights(
    topology: &WalkTopology,
) -> Result<HashMap<Position, ObservedWeights>, String> {
    let padded = topology.clone().with_self_loops(true);
    let graph = build_explicit_graph(&padded, true).map_err(|e| e.to_string())?;
    let mut out: HashMap<Position, ObservedWeights> = HashMap::new();
    for v in 0..graph.vertex_count() {
        let from = graph.site(v).expect("topology graphs carry sites");
        let mut ports = [0u64; 5];
        for &u in graph.neighbors(v) {
            let dir = padded.direction_between(from, graph.site(u).expect("sites"));
            ports[dir.index()] += 1;
        }
        let entry = out.entry(from.clone()).or_insert(ObservedWeights {
            vertices: BigUint::default(),
            ports,
        });
        if entry.ports != ports {
            return Err(format!("vertices at {from} disagree: {:?} vs {ports:?}", entry.ports));
        }
        entry.vertices += 1u32;
    }
    Ok(out)
}

/// Checks the reduced weight table against port counts on the explicit
/// graph. At the target only the vertex multiplicity and the kept arrival
/// directions are compared.
pub fn certify_weights(topology: &WalkTopology) -> Result<(), String> {
    let basis = build_basis(topology);
    let table = basis.weights();
    let observed = observed_weights(topology)?;
    for (pos, seen) in &observed {
        if table.multiplicity(pos) != seen.vertices {
            return Err(format!(
                "{topology}: {pos} has {} vertices, table says {}",
                seen.vertices,
                table.multiplicity(pos)
            ));
        }
        for dir in Direction::ALL {
            let want = table.direction_count(pos, dir);
            let dropped = pos == basis.target() && want == 0;
            if !dropped && want != seen.ports[dir.index()] {
                return Err(format!(
                    "{topology}: {pos} {dir}: {} ports, table says {want}",
                    seen.ports[dir.index()]
                ));
            }
        }
    }
    for pos in table.positions() {
        if !observed.contains_key(pos) {
            return Err(format!("{topology}: table position {pos} absent from graph"));
        }
    }
    Ok(())
}

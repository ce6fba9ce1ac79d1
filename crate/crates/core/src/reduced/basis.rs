//! Symmetry-collapsed basis states and their multiplicities.
//!
//! A reduced state `|J, x, s⟩` is the normalized sum of every full state
//! `|j, v⟩` whose vertex `v` sits at collapsed position `(x, s)` and whose
//! port `j` points in effective direction `J`. Its squared norm factor is
//! `N(J,x,s) = Ñ(x,s) · N_xs(J)`: `Ñ` counts vertices at the position and
//! `N_xs(J)` counts ports per vertex in that direction.
//!
//! Tails and central-corner concatenated tables follow the published ones.
//! For concatenated cubes the port of a level-`k` vertex at weight
//! `d_k - 1` that leads to the anchor corner is an `U` port (it pairs with
//! the anchor's `D` ports), so that vertex has no `R` port. The penetration
//! walk uses the same tables without target pruning; only the target's
//! self-loop state is dropped (it can never be populated before the walker
//! is absorbed).

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;

use crate::classical::binomial_row;
use crate::topology::{
    concat_level, concat_weight, intrinsic_degree, Canonical, Direction, Position, WalkTopology,
};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedState {
    pub direction: Direction,
    pub position: Position,
}

/// Multiplicities per collapsed position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightTable {
    degree: usize,
    entries: HashMap<Position, (BigUint, [u64; 5])>,
}

impl WeightTable {
    /// Ñ(x,s): number of vertices at the position (0 if absent).
    pub fn multiplicity(&self, pos: &Position) -> BigUint {
        self.entries
            .get(pos)
            .map(|(n, _)| n.clone())
            .unwrap_or_default()
    }

    /// N_xs(J): ports per vertex pointing in direction `J`.
    pub fn direction_count(&self, pos: &Position, dir: Direction) -> u64 {
        self.entries
            .get(pos)
            .map(|(_, w)| w[dir.index()])
            .unwrap_or(0)
    }

    /// N(J,x,s) = Ñ(x,s) · N_xs(J).
    pub fn norm_weight(&self, state: &ReducedState) -> BigUint {
        self.multiplicity(&state.position)
            * BigUint::from(self.direction_count(&state.position, state.direction))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn positions(&self) -> impl Iterator<Item = &Position> {
        self.entries.keys()
    }
}

/// Enumerated reduced basis for one topology, in canonical order.
#[derive(Debug, Clone)]
pub struct ReducedBasis {
    topology: WalkTopology,
    states: Vec<ReducedState>,
    index: HashMap<ReducedState, usize>,
    weights: WeightTable,
    start: Position,
    target: Position,
}

impl ReducedBasis {
    pub fn topology(&self) -> &WalkTopology {
        &self.topology
    }

    pub fn states(&self) -> &[ReducedState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, state: &ReducedState) -> Option<usize> {
        self.index.get(state).copied()
    }

    pub fn weights(&self) -> &WeightTable {
        &self.weights
    }

    pub fn start(&self) -> &Position {
        &self.start
    }

    pub fn target(&self) -> &Position {
        &self.target
    }

    /// Σ Ñ(x,s)·N_xs(J) over the basis: the number of full-space states the
    /// reduced walk accounts for.
    pub fn covered_dimension(&self) -> BigUint {
        self.states.iter().map(|s| self.weights.norm_weight(s)).sum()
    }

    /// State reached by traversing the edge that `state` points along.
    pub fn shift_partner(&self, state: &ReducedState) -> ReducedState {
        let pos = &state.position;
        match self.topology.canonical() {
            Canonical::Bare { .. } | Canonical::Tails { .. } => {
                let mut next = pos.clone();
                let direction = match state.direction {
                    Direction::R => {
                        next.x += 1;
                        Direction::L
                    }
                    Direction::L => {
                        next.x -= 1;
                        Direction::R
                    }
                    Direction::D => {
                        next.s[0] += 1;
                        Direction::U
                    }
                    Direction::U => {
                        next.s[0] -= 1;
                        Direction::D
                    }
                    Direction::O => Direction::O,
                };
                ReducedState {
                    direction,
                    position: next,
                }
            }
            Canonical::Concat { dims, .. } => {
                let level = concat_level(&dims, pos);
                let mut next = pos.clone();
                let bump = |p: &mut Position, delta: isize| {
                    if level == 0 {
                        p.x = (p.x as isize + delta) as usize;
                    } else {
                        let s = &mut p.s[level - 1];
                        *s = (*s as isize + delta) as usize;
                    }
                };
                let direction = match state.direction {
                    Direction::R => {
                        bump(&mut next, 1);
                        Direction::L
                    }
                    Direction::L => {
                        bump(&mut next, -1);
                        Direction::R
                    }
                    Direction::D => {
                        next.s[level] = dims[level + 1] - 1;
                        Direction::U
                    }
                    Direction::U => {
                        next.s[level - 1] = dims[level];
                        Direction::D
                    }
                    Direction::O => Direction::O,
                };
                ReducedState {
                    direction,
                    position: next,
                }
            }
        }
    }
}

/// Enumerates the reduced basis and its weight table for `topology`.
///
/// Self-loop padding is implied: the quantum walk always runs on the
/// regularized graph, whatever `topology.self_loops()` says.
pub fn build_basis(topology: &WalkTopology) -> ReducedBasis {
    let p = topology.degree();
    let start = topology.start_position();
    let target = topology.target_position();
    let mut rows: Vec<(Position, BigUint, [u64; 5])> = Vec::new();

    match topology.canonical() {
        Canonical::Bare { d } => {
            let binom = binomial_row(d);
            for x in 0..=d {
                let mut w = [0u64; 5];
                w[Direction::R.index()] = (d - x) as u64;
                w[Direction::L.index()] = x as u64;
                rows.push((Position::new(x, vec![]), binom[x].clone(), w));
            }
        }
        Canonical::Tails { d, n, q } => {
            let binom = binomial_row(d);
            for x in 0..=d {
                let mut w = [0u64; 5];
                w[Direction::R.index()] = (d - x) as u64;
                w[Direction::L.index()] = x as u64;
                if x != d {
                    w[Direction::D.index()] = n as u64;
                }
                rows.push((Position::new(x, vec![0]), binom[x].clone(), w));
                if x == d {
                    continue;
                }
                let tail_mult = &binom[x] * BigUint::from(n);
                for s in 1..=q {
                    let mut w = [0u64; 5];
                    w[Direction::U.index()] = 1;
                    if s < q {
                        w[Direction::D.index()] = 1;
                        w[Direction::O.index()] = (p - 2) as u64;
                    } else {
                        w[Direction::O.index()] = (p - 1) as u64;
                    }
                    rows.push((Position::new(x, vec![s]), tail_mult.clone(), w));
                }
            }
        }
        Canonical::Concat { dims, penetrate } => {
            let binoms: Vec<Vec<BigUint>> = dims.iter().map(|&d| binomial_row(d)).collect();
            let d0 = dims[0];
            for x in 0..=d0 {
                let pos = Position::new(x, dims[1..].to_vec());
                let mult = binoms[0][x].clone();
                let descend = penetrate || x != d0;
                concat_rows(&dims, p, &binoms, pos, mult, descend, &mut rows);
            }
        }
    }

    let mut states = Vec::new();
    let mut entries = HashMap::new();
    for (pos, mult, mut w) in rows {
        if pos == target {
            // only ports along edges the walker can arrive through survive
            w[Direction::O.index()] = 0;
            w[Direction::D.index()] = 0;
        }
        for dir in Direction::ALL {
            if w[dir.index()] > 0 {
                states.push(ReducedState {
                    direction: dir,
                    position: pos.clone(),
                });
            }
        }
        entries.insert(pos, (mult, w));
    }
    let index = states
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i))
        .collect();
    ReducedBasis {
        topology: topology.clone(),
        states,
        index,
        weights: WeightTable {
            degree: p,
            entries,
        },
        start,
        target,
    }
}

fn concat_rows(
    dims: &[usize],
    p: usize,
    binoms: &[Vec<BigUint>],
    pos: Position,
    mult: BigUint,
    descend: bool,
    rows: &mut Vec<(Position, BigUint, [u64; 5])>,
) {
    let m = dims.len() - 1;
    let level = concat_level(dims, &pos);
    let weight = concat_weight(&pos, level);
    let dk = dims[level];
    let mut w = [0u64; 5];
    if level == 0 || weight + 2 <= dk {
        w[Direction::R.index()] = (dk - weight) as u64;
    } else {
        w[Direction::U.index()] = 1;
    }
    w[Direction::L.index()] = weight as u64;
    if level < m && descend {
        w[Direction::D.index()] = dims[level + 1] as u64;
    }
    let padded = p - intrinsic_degree(dims, level);
    if descend || level > 0 {
        w[Direction::O.index()] = padded as u64;
    }
    rows.push((pos.clone(), mult.clone(), w));
    if level < m && descend {
        let next = level + 1;
        for s in 0..dims[next] {
            let mut child = pos.clone();
            child.s[next - 1] = s;
            let child_mult = &mult * &binoms[next][s];
            concat_rows(dims, p, binoms, child, child_mult, descend, rows);
        }
    }
}

/// Unit-norm reduced start state: uniform over the start vertex's ports.
pub fn initial_amplitudes(basis: &ReducedBasis) -> Vec<(usize, f64)> {
    let p = basis.weights.degree as f64;
    let start = basis.start.clone();
    basis
        .states
        .iter()
        .enumerate()
        .filter(|(_, s)| s.position == start)
        .map(|(i, s)| {
            debug_assert!(basis.weights.multiplicity(&start).is_one());
            let n = basis.weights.direction_count(&start, s.direction) as f64;
            (i, (n / p).sqrt())
        })
        .collect()
}

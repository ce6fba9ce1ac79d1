//! Brute-force classical oracles on explicit graphs.

use std::collections::{BTreeMap, VecDeque};

use crate::error::ClassicalError;
use crate::graph::ExplicitGraph;
use crate::scalar::Field;

/// Expected first-passage time from `graph.start()` to `graph.target()` of
/// the simple random walk (self-loops count once towards the degree).
///
/// Solves `τ_i = 1 + Σ_j p_ij τ_j`, `τ_target = 0` by sparse Gaussian
/// elimination over `T`; exact when `T` is a rational type.
pub fn markov_first_passage<T: Field>(graph: &ExplicitGraph) -> Result<T, ClassicalError> {
    let (start, target) = (graph.start(), graph.target());
    if start == target {
        return Ok(T::zero());
    }
    let reach = graph.reachable_from(start, Some(target));
    if !reach[target] {
        return Err(ClassicalError::SingularSystem);
    }
    let unknowns: Vec<usize> = (0..graph.vertex_count())
        .filter(|&v| reach[v] && v != target)
        .collect();
    let mut slot = vec![usize::MAX; graph.vertex_count()];
    for (i, &v) in unknowns.iter().enumerate() {
        slot[v] = i;
    }

    // rows of (I - P) restricted to the unknowns, rhs all ones
    let mut rows: Vec<BTreeMap<usize, T>> = Vec::with_capacity(unknowns.len());
    for &v in &unknowns {
        let deg = T::from_u64(graph.degree(v) as u64);
        let step = T::one() / deg;
        let mut row = BTreeMap::new();
        row.insert(slot[v], T::one());
        for &u in graph.neighbors(v) {
            if u == target {
                continue;
            }
            let e = row.entry(slot[u]).or_insert_with(T::zero);
            *e = e.clone() - step.clone();
        }
        rows.push(row);
    }
    let mut rhs = vec![T::one(); unknowns.len()];

    // far-from-target vertices first keeps fill-in low on tree-like parts
    let dist = bfs_distance(graph, target);
    let mut order: Vec<usize> = (0..unknowns.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(dist[unknowns[i]]), i));

    let mut eliminated = vec![false; unknowns.len()];
    let mut pivots: Vec<(usize, T, Vec<(usize, T)>)> = Vec::with_capacity(order.len());
    for &i in &order {
        let mut row = std::mem::take(&mut rows[i]);
        let pivot = row.remove(&i).unwrap_or_else(T::zero);
        if pivot.is_negligible() {
            return Err(ClassicalError::SingularSystem);
        }
        let rest: Vec<(usize, T)> = row.into_iter().collect();
        for &(r, _) in &rest {
            debug_assert!(!eliminated[r]);
            let Some(coef) = rows[r].remove(&i) else {
                continue;
            };
            let factor = coef / pivot.clone();
            for (c, a) in &rest {
                let e = rows[r].entry(*c).or_insert_with(T::zero);
                *e = e.clone() - factor.clone() * a.clone();
            }
            rhs[r] = rhs[r].clone() - factor * rhs[i].clone();
        }
        eliminated[i] = true;
        pivots.push((i, pivot, rest));
    }

    let mut tau = vec![T::zero(); unknowns.len()];
    for (i, pivot, rest) in pivots.into_iter().rev() {
        let mut acc = rhs[i].clone();
        for (c, a) in rest {
            acc = acc - a * tau[c].clone();
        }
        tau[i] = acc / pivot;
    }
    Ok(tau[slot[start]].clone())
}

fn bfs_distance(graph: &ExplicitGraph, from: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; graph.vertex_count()];
    dist[from] = 0;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for &u in graph.neighbors(v) {
            if dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    dist
}

/// Return time of `v` from the stationary distribution:
/// `Σ_u deg(u) / deg(v)`.
pub fn stationary_return<T: Field>(graph: &ExplicitGraph, v: usize) -> T {
    T::from_u64(graph.degree_sum() as u64) / T::from_u64(graph.degree(v) as u64)
}

/// First-return time of `v` computed by first-passage solves from each of
/// its neighbors (a loop returns immediately).
pub fn first_return_by_passage<T: Field>(
    graph: &ExplicitGraph,
    v: usize,
) -> Result<T, ClassicalError> {
    let mut total = T::zero();
    for &u in graph.neighbors(v) {
        if u != v {
            let g = graph.clone().with_endpoints(u, v);
            total = total + markov_first_passage::<T>(&g)?;
        }
    }
    Ok(T::one() + total / T::from_u64(graph.degree(v) as u64))
}

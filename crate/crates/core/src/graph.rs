//! Adjacency-level realization of a topology, used by both oracles.
//!
//! Vertex order: central-cube bitstrings ascending (`0..2^d`), then the
//! attachment vertices grouped by anchor bitstring ascending, each group in
//! its local order (tail-major for tails, cube-by-cube depth-first for
//! concatenated structures). On central-cube vertices port `j < d` is the
//! edge flipping bit `j`.

use num_traits::ToPrimitive;

use crate::error::StructureError;
use crate::topology::{Canonical, Position, WalkTopology};

/// Largest vertex count an explicit graph may have.
pub const MAX_EXPLICIT_VERTICES: u128 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitGraph {
    adjacency: Vec<Vec<usize>>,
    sites: Option<Vec<Position>>,
    start: usize,
    target: usize,
}

impl ExplicitGraph {
    /// Builds a graph from an undirected edge list. An edge `(v, v)` is a
    /// self-loop and adds one to the degree of `v`.
    pub fn from_edges(
        vertex_count: usize,
        edges: &[(usize, usize)],
        start: usize,
        target: usize,
    ) -> Self {
        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(u, v) in edges {
            adjacency[u].push(v);
            if u != v {
                adjacency[v].push(u);
            }
        }
        Self {
            adjacency,
            sites: None,
            start,
            target,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn with_endpoints(mut self, start: usize, target: usize) -> Self {
        self.start = start;
        self.target = target;
        self
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degree_sum(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    pub fn self_loops(&self, v: usize) -> usize {
        self.adjacency[v].iter().filter(|&&u| u == v).count()
    }

    /// Collapsed coordinates of `v`, when the graph came from a topology.
    pub fn site(&self, v: usize) -> Option<&Position> {
        self.sites.as_ref().map(|s| &s[v])
    }

    /// Pads every vertex with self-loops up to degree `p`.
    pub fn pad_to_degree(&mut self, p: usize) -> Result<(), StructureError> {
        for v in 0..self.adjacency.len() {
            let deg = self.adjacency[v].len();
            if deg > p {
                return Err(StructureError::NotRegular {
                    vertex: v,
                    found: deg,
                    expected: p,
                });
            }
            self.adjacency[v].extend(std::iter::repeat_n(v, p - deg));
        }
        Ok(())
    }

    /// Common degree of all vertices, if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let p = self.adjacency.first()?.len();
        self.adjacency.iter().all(|a| a.len() == p).then_some(p)
    }

    /// Vertices reachable from `from` without stepping out of `blocked`
    /// (the blocked vertex itself is reported but not expanded).
    pub fn reachable_from(&self, from: usize, blocked: Option<usize>) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count()];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(v) = stack.pop() {
            if Some(v) == blocked {
                continue;
            }
            for &u in &self.adjacency[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() == 0 || self.reachable_from(0, None).iter().all(|&b| b)
    }

    /// `true` when every edge is listed symmetrically.
    pub fn is_undirected(&self) -> bool {
        use std::collections::HashMap;
        let mut count: HashMap<(usize, usize), isize> = HashMap::new();
        for (v, adj) in self.adjacency.iter().enumerate() {
            for &u in adj {
                if u != v {
                    *count.entry((v.min(u), v.max(u))).or_default() += if v < u { 1 } else { -1 };
                }
            }
        }
        count.values().all(|&c| c == 0)
    }
}

struct Builder {
    adjacency: Vec<Vec<usize>>,
    sites: Vec<Position>,
}

impl Builder {
    fn add_vertex(&mut self, site: Position) -> usize {
        self.adjacency.push(Vec::new());
        self.sites.push(site);
        self.adjacency.len() - 1
    }

    fn add_edge(&mut self, u: usize, v: usize) {
        self.adjacency[u].push(v);
        self.adjacency[v].push(u);
    }

    fn central_cube(d: usize, anchor_s: Vec<usize>) -> Self {
        let size = 1usize << d;
        let adjacency = (0..size)
            .map(|b| (0..d).map(|j| b ^ (1 << j)).collect())
            .collect();
        let sites = (0..size)
            .map(|b: usize| Position::new(b.count_ones() as usize, anchor_s.clone()))
            .collect();
        Self { adjacency, sites }
    }

    /// Attaches a level-`level` cube whose all-ones corner is `anchor`, then
    /// recurses into every new vertex.
    fn attach_cube(&mut self, dims: &[usize], level: usize, anchor: usize) {
        let dk = dims[level];
        let full = (1usize << dk) - 1;
        let anchor_site = self.sites[anchor].clone();
        let first = self.adjacency.len();
        // bitstrings 0..full (exclusive of the all-ones anchor) map to first + b
        let id = |b: usize| if b == full { anchor } else { first + b };
        for b in 0..full {
            let mut site = anchor_site.clone();
            site.s[level - 1] = b.count_ones() as usize;
            self.add_vertex(site);
        }
        for b in 0..full {
            for j in 0..dk {
                let nb = b ^ (1 << j);
                if nb == full || b < nb {
                    self.add_edge(id(b), id(nb));
                }
            }
        }
        if level + 1 < dims.len() {
            for b in 0..full {
                self.attach_cube(dims, level + 1, first + b);
            }
        }
    }
}

/// Materializes `topology` as an explicit graph.
///
/// With `prune_target_attachment`, the external graph hanging off the
/// target vertex is omitted (it is never reached by a walk that stops at
/// the target). With self-loops enabled, every vertex is padded with loops
/// up to `topology.degree()`.
pub fn build_explicit_graph(
    topology: &WalkTopology,
    prune_target_attachment: bool,
) -> Result<ExplicitGraph, StructureError> {
    let count = topology.vertex_count(prune_target_attachment);
    let count = count.to_u128().unwrap_or(u128::MAX);
    if count > MAX_EXPLICIT_VERTICES {
        return Err(StructureError::SizeExceeded {
            count,
            limit: MAX_EXPLICIT_VERTICES,
        });
    }
    let d = topology.d();
    let cube = 1usize << d;
    let (mut builder, start, target) = match topology.canonical() {
        Canonical::Bare { .. } => (Builder::central_cube(d, vec![]), 0, cube - 1),
        Canonical::Tails { n, q, .. } => {
            let mut b = Builder::central_cube(d, vec![0]);
            for anchor in 0..cube {
                if prune_target_attachment && anchor == cube - 1 {
                    continue;
                }
                let x = anchor.count_ones() as usize;
                for _ in 0..n {
                    let mut prev = anchor;
                    for s in 1..=q {
                        let v = b.add_vertex(Position::new(x, vec![s]));
                        b.add_edge(prev, v);
                        prev = v;
                    }
                }
            }
            (b, 0, cube - 1)
        }
        Canonical::Concat { dims, penetrate } => {
            let mut b = Builder::central_cube(d, dims[1..].to_vec());
            for anchor in 0..cube {
                if prune_target_attachment && !penetrate && anchor == cube - 1 {
                    continue;
                }
                b.attach_cube(&dims, 1, anchor);
            }
            let (start, target) = if penetrate {
                let start_site = topology.start_position();
                let target_site = topology.target_position();
                let find = |site: &Position| b.sites.iter().position(|s| s == site).unwrap();
                (find(&start_site), find(&target_site))
            } else {
                (0, cube - 1)
            };
            (b, start, target)
        }
    };
    let mut graph = ExplicitGraph {
        adjacency: std::mem::take(&mut builder.adjacency),
        sites: Some(std::mem::take(&mut builder.sites)),
        start,
        target,
    };
    if topology.self_loops() {
        graph.pad_to_degree(topology.degree())?;
    }
    Ok(graph)
}

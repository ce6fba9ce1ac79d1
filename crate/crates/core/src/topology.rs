//! Embedding scenarios and their scalar properties.
//!
//! A [`WalkTopology`] is a declarative description: a central hypercube,
//! optionally decorated at every vertex with `n` tails of length `q`, or
//! with recursively attached hypercubes. Everything else in the crate
//! (explicit graphs, reduced bases, closed forms) is derived from it.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::StructureError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TopologyKind {
    Bare,
    Tails,
    Concatenated,
}

/// Which corners a concatenated walk connects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum WalkMode {
    /// Corner to corner on the central hypercube.
    #[default]
    CentralCornerToCorner,
    /// Between the two outermost corners of the whole structure.
    PenetrateFull,
}

/// Effective direction of a walker after symmetry collapse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    R,
    L,
    D,
    U,
    O,
}

impl Direction {
    pub const ALL: [Direction; 5] = [
        Direction::R,
        Direction::L,
        Direction::D,
        Direction::U,
        Direction::O,
    ];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Direction::R => "R",
            Direction::L => "L",
            Direction::D => "D",
            Direction::U => "U",
            Direction::O => "O",
        };
        f.write_str(c)
    }
}

/// Collapsed coordinates of a vertex: Hamming weight `x` on the central cube
/// and the attachment coordinate `s`.
///
/// * bare: `s` is empty
/// * tails: `s = [height]`, `0` on the cube itself
/// * concatenated: `s = [s_1, .., s_m]` with `s_k = d_k` meaning "not inside
///   a level-`k` cube" (the anchor corner of every attached cube is its
///   all-ones corner)
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position {
    pub x: usize,
    pub s: Vec<usize>,
}

impl Position {
    pub fn new(x: usize, s: Vec<usize>) -> Self {
        Self { x, s }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.x)?;
        for s in &self.s {
            write!(f, ",{s}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Shape {
    Bare { d: usize },
    Tails { d: usize, n: usize, q: usize },
    Concatenated { dims: Vec<usize>, mode: WalkMode },
}

/// An embedding scenario plus the walk endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WalkTopology {
    shape: Shape,
    self_loops: bool,
}

impl WalkTopology {
    pub fn bare(d: usize) -> Result<Self, StructureError> {
        if d == 0 {
            return Err(StructureError::InvalidTopology("d must be >= 1".into()));
        }
        Ok(Self {
            shape: Shape::Bare { d },
            self_loops: false,
        })
    }

    pub fn tails(d: usize, n: usize, q: usize) -> Result<Self, StructureError> {
        if d == 0 {
            return Err(StructureError::InvalidTopology("d must be >= 1".into()));
        }
        Ok(Self {
            shape: Shape::Tails { d, n, q },
            self_loops: false,
        })
    }

    pub fn concatenated(dims: Vec<usize>, mode: WalkMode) -> Result<Self, StructureError> {
        if dims.is_empty() {
            return Err(StructureError::InvalidTopology("dims must be non-empty".into()));
        }
        if dims.contains(&0) {
            return Err(StructureError::InvalidTopology("all dims must be >= 1".into()));
        }
        if mode == WalkMode::PenetrateFull && dims.len() < 2 {
            return Err(StructureError::InvalidTopology(
                "penetration walk needs at least one attached level".into(),
            ));
        }
        Ok(Self {
            shape: Shape::Concatenated { dims, mode },
            self_loops: false,
        })
    }

    pub fn with_self_loops(mut self, self_loops: bool) -> Self {
        self.self_loops = self_loops;
        self
    }

    pub fn self_loops(&self) -> bool {
        self.self_loops
    }

    pub fn kind(&self) -> TopologyKind {
        match self.shape {
            Shape::Bare { .. } => TopologyKind::Bare,
            Shape::Tails { .. } => TopologyKind::Tails,
            Shape::Concatenated { .. } => TopologyKind::Concatenated,
        }
    }

    /// Dimension of the central cube (`d_0` for concatenated structures).
    pub fn d(&self) -> usize {
        match &self.shape {
            Shape::Bare { d } | Shape::Tails { d, .. } => *d,
            Shape::Concatenated { dims, .. } => dims[0],
        }
    }

    pub fn n(&self) -> usize {
        match self.shape {
            Shape::Tails { n, .. } => n,
            _ => 0,
        }
    }

    pub fn q(&self) -> usize {
        match self.shape {
            Shape::Tails { q, .. } => q,
            _ => 0,
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        match &self.shape {
            Shape::Concatenated { dims, .. } => dims.clone(),
            _ => vec![self.d()],
        }
    }

    pub fn mode(&self) -> WalkMode {
        match self.shape {
            Shape::Concatenated { mode, .. } => mode,
            _ => WalkMode::CentralCornerToCorner,
        }
    }

    /// Number of attached levels `m` (0 unless concatenated).
    pub fn levels(&self) -> usize {
        match &self.shape {
            Shape::Concatenated { dims, .. } => dims.len() - 1,
            _ => 0,
        }
    }

    pub(crate) fn canonical(&self) -> Canonical {
        match &self.shape {
            Shape::Bare { d } => Canonical::Bare { d: *d },
            Shape::Tails { d, n, q } if *n == 0 || *q == 0 => Canonical::Bare { d: *d },
            Shape::Tails { d, n, q } => Canonical::Tails {
                d: *d,
                n: *n,
                q: *q,
            },
            Shape::Concatenated { dims, mode } => {
                if dims.len() == 1 {
                    Canonical::Bare { d: dims[0] }
                } else {
                    Canonical::Concat {
                        dims: dims.clone(),
                        penetrate: *mode == WalkMode::PenetrateFull,
                    }
                }
            }
        }
    }

    /// Degree `p` of the regularized graph.
    pub fn degree(&self) -> usize {
        match self.canonical() {
            Canonical::Bare { d } => d,
            Canonical::Tails { d, n, .. } => d + n,
            Canonical::Concat { dims, .. } => {
                let m = dims.len() - 1;
                (0..=m).map(|k| intrinsic_degree(&dims, k)).max().unwrap_or(0)
            }
        }
    }

    /// Dimension of the symmetric subspace the reduced walk runs in.
    pub fn reduced_dimension(&self) -> u128 {
        match self.canonical() {
            Canonical::Bare { d } => 2 * d as u128,
            Canonical::Tails { d, n, q } => {
                let (d, q) = (d as u128, q as u128);
                let full = d * (3 * q + 2);
                // Interior tail vertices carry no loops when p = 2.
                if d == 1 && n == 1 {
                    full - (q - 1)
                } else {
                    full
                }
            }
            Canonical::Concat { dims, penetrate } => {
                let p = self.degree();
                let m = dims.len() - 1;
                let loops_at = |k: usize| p > intrinsic_degree(&dims, k);
                if !penetrate {
                    let prods: Vec<u128> = prefix_products(&dims, 0);
                    let mut total = 2 * prods.iter().sum::<u128>() + prods[m];
                    if loops_at(0) {
                        total += dims[0] as u128;
                    }
                    total += (1..m).filter(|&k| loops_at(k)).map(|k| prods[k]).sum::<u128>();
                    total
                } else {
                    let d0 = dims[0] as u128;
                    // prods[i] = d_1 * .. * d_{i+1}
                    let prods: Vec<u128> = prefix_products(&dims, 1);
                    let hanging = 2 * prods.iter().sum::<u128>() + prods[m - 1];
                    let mut total = 2 * d0 + (d0 + 1) * hanging - 1;
                    if loops_at(0) {
                        total += d0 + 1;
                    }
                    total += (1..m)
                        .filter(|&k| loops_at(k))
                        .map(|k| (d0 + 1) * prods[k - 1])
                        .sum::<u128>();
                    total
                }
            }
        }
    }

    /// Per-vertex number of outgoing edges `⟨E⟩` of the combined external
    /// graph attached to a central-cube vertex (legs included).
    pub fn total_outgoing_edges(&self, with_self_loops: bool) -> BigUint {
        match self.canonical() {
            Canonical::Bare { .. } => BigUint::zero(),
            Canonical::Tails { d, n, q } => {
                let (d, n, q) = (d as u64, n as u64, q as u64);
                if with_self_loops {
                    // every tail vertex padded to degree d+n, plus the n legs at the anchor
                    BigUint::from(n * q * (n + d) + n)
                } else {
                    BigUint::from(2 * n * q)
                }
            }
            Canonical::Concat { dims, .. } => {
                let mut e = f_e(1, &dims);
                if with_self_loops {
                    let p = self.degree();
                    let m = dims.len() - 1;
                    let mut count = BigUint::one();
                    for k in 1..=m {
                        count *= (BigUint::one() << dims[k]) - 1u32;
                        let loops = p - intrinsic_degree(&dims, k);
                        e += &count * BigUint::from(loops);
                    }
                }
                e
            }
        }
    }

    /// Vertex count of the explicit realization.
    pub fn vertex_count(&self, prune_target_attachment: bool) -> BigUint {
        let one = BigUint::one();
        match self.canonical() {
            Canonical::Bare { d } => &one << d,
            Canonical::Tails { d, n, q } => {
                let cube = &one << d;
                let decorated = if prune_target_attachment {
                    &cube - 1u32
                } else {
                    cube.clone()
                };
                cube + decorated * BigUint::from(n * q)
            }
            Canonical::Concat { dims, penetrate } => {
                let cube = &one << dims[0];
                let decorated = if prune_target_attachment && !penetrate {
                    &cube - 1u32
                } else {
                    cube.clone()
                };
                let mut sub = BigUint::zero();
                for &dk in dims[1..].iter().rev() {
                    sub = ((&one << dk) - 1u32) * (one.clone() + sub);
                }
                cube + decorated * sub
            }
        }
    }

    /// Collapsed coordinates of the walk's start vertex.
    pub fn start_position(&self) -> Position {
        match self.canonical() {
            Canonical::Bare { .. } => Position::new(0, vec![]),
            Canonical::Tails { .. } => Position::new(0, vec![0]),
            Canonical::Concat { dims, penetrate } => {
                if penetrate {
                    Position::new(0, vec![0; dims.len() - 1])
                } else {
                    Position::new(0, dims[1..].to_vec())
                }
            }
        }
    }

    /// Collapsed coordinates of the target vertex.
    pub fn target_position(&self) -> Position {
        let mut pos = self.start_position();
        pos.x = self.d();
        pos
    }

    /// Effective direction of the edge `from -> to` between adjacent sites.
    pub fn direction_between(&self, from: &Position, to: &Position) -> Direction {
        if from == to {
            return Direction::O;
        }
        match self.canonical() {
            Canonical::Bare { .. } => {
                if to.x > from.x {
                    Direction::R
                } else {
                    Direction::L
                }
            }
            Canonical::Tails { .. } => match to.s[0].cmp(&from.s[0]) {
                std::cmp::Ordering::Greater => Direction::D,
                std::cmp::Ordering::Less => Direction::U,
                std::cmp::Ordering::Equal => {
                    if to.x > from.x {
                        Direction::R
                    } else {
                        Direction::L
                    }
                }
            },
            Canonical::Concat { dims, .. } => {
                let lf = concat_level(&dims, from);
                let lt = concat_level(&dims, to);
                match lt.cmp(&lf) {
                    std::cmp::Ordering::Greater => Direction::D,
                    std::cmp::Ordering::Less => Direction::U,
                    std::cmp::Ordering::Equal => {
                        if concat_weight(from, lt) < concat_weight(to, lt) {
                            Direction::R
                        } else {
                            Direction::L
                        }
                    }
                }
            }
        }
    }
}

/// Normalized view used by the computations: degenerate tails and
/// single-level concatenations collapse to the bare cube.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Canonical {
    Bare { d: usize },
    Tails { d: usize, n: usize, q: usize },
    Concat { dims: Vec<usize>, penetrate: bool },
}

/// Degree of a (non-anchor) vertex of a level-`k` cube before loop padding.
pub(crate) fn intrinsic_degree(dims: &[usize], k: usize) -> usize {
    let m = dims.len() - 1;
    if k < m {
        dims[k] + dims[k + 1]
    } else {
        dims[k]
    }
}

/// Level of a concatenated site: `0` on the central cube, otherwise the
/// deepest `k` with `s_k < d_k`.
pub(crate) fn concat_level(dims: &[usize], pos: &Position) -> usize {
    let mut level = 0;
    for (k, (&s, &d)) in pos.s.iter().zip(&dims[1..]).enumerate() {
        if s < d {
            level = k + 1;
        } else {
            break;
        }
    }
    level
}

pub(crate) fn concat_weight(pos: &Position, level: usize) -> usize {
    if level == 0 {
        pos.x
    } else {
        pos.s[level - 1]
    }
}

/// `out[i] = dims[from] * .. * dims[from + i]` over the remaining dims.
fn prefix_products(dims: &[usize], from: usize) -> Vec<u128> {
    let mut acc = 1u128;
    dims[from..]
        .iter()
        .map(|&d| {
            acc *= d as u128;
            acc
        })
        .collect()
}

/// Outgoing edges of a level-`level` cube together with every cube
/// hanging off it, for the loop-free structure.
///
/// `ẽ_k = d_k 2^{d_k}` for `k <= m`, `ẽ_{m+1} = 0`, and the subtree
/// multiplicities are products of `2^{d_k} - 1` from `level` down.
/// At `level = 0` the central cube's own edges are added to `f_e(1)`
/// once, which is *not* the degree sum of the whole structure (see
/// [`structure_degree_sum`]).
pub fn f_e(level: usize, dims: &[usize]) -> BigUint {
    let m = dims.len() - 1;
    assert!(level <= m + 1, "level {level} beyond m+1 = {}", m + 1);
    let e_tilde = |k: usize| -> BigUint {
        if k > m {
            BigUint::zero()
        } else {
            BigUint::from(dims[k]) << dims[k]
        }
    };
    let mut total = e_tilde(level);
    let mut mult = BigUint::one();
    for j in level..m {
        if j >= 1 {
            mult *= (BigUint::one() << dims[j]) - 1u32;
        }
        total += e_tilde(j + 1) * &mult;
    }
    total
}

/// Degree sum of the full, unpruned, loop-free concatenated structure.
pub fn structure_degree_sum(dims: &[usize]) -> BigUint {
    let central = BigUint::from(dims[0]) << dims[0];
    if dims.len() == 1 {
        return central;
    }
    central + (f_e(1, dims) << dims[0])
}

impl fmt::Display for WalkTopology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.shape {
            Shape::Bare { d } => write!(f, "kind=bare d={d}")?,
            Shape::Tails { d, n, q } => write!(f, "kind=tails d={d} n={n} q={q}")?,
            Shape::Concatenated { dims, mode } => {
                let dims = dims
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                let mode = match mode {
                    WalkMode::CentralCornerToCorner => "central",
                    WalkMode::PenetrateFull => "penetrate",
                };
                write!(f, "kind=concat dims={dims} mode={mode}")?
            }
        }
        write!(f, " loops={}", self.self_loops)
    }
}

impl FromStr for WalkTopology {
    type Err = StructureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut kind = None;
        let (mut d, mut n, mut q) = (None, None, None);
        let mut dims = None;
        let mut mode = WalkMode::CentralCornerToCorner;
        let mut loops = false;
        let bad = |msg: String| StructureError::Parse(msg);
        let int = |key: &str, v: &str| {
            v.parse::<usize>()
                .map_err(|_| StructureError::Parse(format!("{key}: not an integer: {v:?}")))
        };
        for token in s.split_whitespace() {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got {token:?}")))?;
            match key {
                "kind" => kind = Some(value.to_string()),
                "d" => d = Some(int(key, value)?),
                "n" => n = Some(int(key, value)?),
                "q" => q = Some(int(key, value)?),
                "dims" => {
                    dims = Some(
                        value
                            .split(',')
                            .map(|v| int(key, v))
                            .collect::<Result<Vec<_>, _>>()?,
                    )
                }
                "mode" => {
                    mode = match value {
                        "central" => WalkMode::CentralCornerToCorner,
                        "penetrate" => WalkMode::PenetrateFull,
                        other => return Err(bad(format!("unknown mode {other:?}"))),
                    }
                }
                "loops" => {
                    loops = value
                        .parse::<bool>()
                        .map_err(|_| bad(format!("loops: expected true/false, got {value:?}")))?
                }
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        let need = |v: Option<usize>, key: &str| v.ok_or_else(|| bad(format!("missing {key}")));
        let topo = match kind.as_deref() {
            Some("bare") => WalkTopology::bare(need(d, "d")?)?,
            Some("tails") => WalkTopology::tails(need(d, "d")?, need(n, "n")?, need(q, "q")?)?,
            Some("concat") => {
                WalkTopology::concatenated(dims.ok_or_else(|| bad("missing dims".into()))?, mode)?
            }
            Some(other) => return Err(bad(format!("unknown kind {other:?}"))),
            None => return Err(bad("missing kind".into())),
        };
        Ok(topo.with_self_loops(loops))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees() {
        assert_eq!(WalkTopology::bare(5).unwrap().degree(), 5);
        assert_eq!(WalkTopology::tails(2, 3, 3).unwrap().degree(), 5);
        let c = WalkTopology::concatenated(vec![2, 2, 2], WalkMode::CentralCornerToCorner).unwrap();
        assert_eq!(c.degree(), 4);
        let u = WalkTopology::concatenated(vec![3, 1, 2], WalkMode::CentralCornerToCorner).unwrap();
        assert_eq!(u.degree(), 4);
    }

    #[test]
    fn reduced_dimension_closed_forms() {
        let t = WalkTopology::tails(10, 10, 1).unwrap();
        assert_eq!(t.reduced_dimension(), 50);
        for d in 2..6u128 {
            for m in 1..4u32 {
                let dims = vec![d as usize; m as usize + 1];
                let c = WalkTopology::concatenated(dims, WalkMode::CentralCornerToCorner).unwrap();
                let dm = d.pow(m + 1);
                assert_eq!(c.reduced_dimension(), 2 * d * (dm - 1) / (d - 1) + dm);
            }
        }
        let p = WalkTopology::concatenated(vec![2, 2], WalkMode::PenetrateFull).unwrap();
        assert_eq!(p.reduced_dimension(), 21);
    }

    #[test]
    fn degenerate_topologies_collapse_to_bare() {
        for (n, q) in [(0, 3), (2, 0), (0, 0)] {
            let t = WalkTopology::tails(4, n, q).unwrap();
            assert_eq!(t.degree(), 4);
            assert_eq!(t.reduced_dimension(), 8);
            assert_eq!(t.total_outgoing_edges(false), BigUint::zero());
        }
        let c = WalkTopology::concatenated(vec![3], WalkMode::CentralCornerToCorner).unwrap();
        assert_eq!(c.degree(), 3);
        assert_eq!(c.reduced_dimension(), 6);
        assert!(WalkTopology::concatenated(vec![3], WalkMode::PenetrateFull).is_err());
        assert!(WalkTopology::concatenated(vec![2, 0], WalkMode::PenetrateFull).is_err());
        assert!(WalkTopology::bare(0).is_err());
    }

    #[test]
    fn outgoing_edges() {
        for (d, n, q) in [(3, 2, 4), (1, 1, 1), (5, 10, 2)] {
            let t = WalkTopology::tails(d, n, q).unwrap();
            assert_eq!(t.total_outgoing_edges(false), BigUint::from((2 * n * q) as u64));
        }
        let c = WalkTopology::concatenated(vec![2, 2], WalkMode::CentralCornerToCorner).unwrap();
        assert_eq!(c.total_outgoing_edges(false), BigUint::from(8u32));
    }

    #[test]
    fn f_e_values() {
        assert_eq!(f_e(2, &[2, 2]), BigUint::zero());
        assert_eq!(f_e(1, &[2, 2]), BigUint::from(8u32));
        assert_eq!(f_e(1, &[2, 2, 2]), BigUint::from(32u32));
        assert_eq!(f_e(3, &[2, 2, 2]), BigUint::zero());
        // the level-2 subtree multiplicity starts at level 2, not level 1
        assert_eq!(f_e(2, &[2, 2, 3, 1]), BigUint::from(3 * 8 + 7 * 2u32));
        assert_eq!(f_e(1, &[2, 2, 3, 1]), BigUint::from(8 + 3 * 24 + 21 * 2u32));
        assert_eq!(structure_degree_sum(&[2, 2]), BigUint::from(8 + 4 * 8u32));
    }

    #[test]
    fn vertex_counts() {
        let b = WalkTopology::bare(3).unwrap();
        assert_eq!(b.vertex_count(true), BigUint::from(8u32));
        let t = WalkTopology::tails(2, 1, 1).unwrap();
        assert_eq!(t.vertex_count(true), BigUint::from(7u32));
        let c = WalkTopology::concatenated(vec![2, 2], WalkMode::CentralCornerToCorner).unwrap();
        assert_eq!(c.vertex_count(true), BigUint::from(13u32));
        let p = WalkTopology::concatenated(vec![2, 2], WalkMode::PenetrateFull).unwrap();
        assert_eq!(p.vertex_count(true), BigUint::from(16u32));
    }

    #[test]
    fn text_format() {
        let t: WalkTopology = "kind=tails d=10 n=50 q=5 loops=true".parse().unwrap();
        assert_eq!(t, WalkTopology::tails(10, 50, 5).unwrap().with_self_loops(true));
        assert_eq!(t.to_string(), "kind=tails d=10 n=50 q=5 loops=true");
        let c: WalkTopology = "kind=concat dims=2,2,2 mode=central loops=false".parse().unwrap();
        assert_eq!(c.dims(), vec![2, 2, 2]);
        assert_eq!(c.to_string(), "kind=concat dims=2,2,2 mode=central loops=false");
        assert!("kind=tails d=3".parse::<WalkTopology>().is_err());
        assert!("kind=blob d=3".parse::<WalkTopology>().is_err());
        assert!("kind=bare d=x".parse::<WalkTopology>().is_err());
        assert!("kind=concat dims=2,2 mode=sideways".parse::<WalkTopology>().is_err());
    }

    #[test]
    fn direction_classification() {
        let c = WalkTopology::concatenated(vec![2, 2], WalkMode::CentralCornerToCorner).unwrap();
        let anchor = Position::new(0, vec![2]);
        let child = Position::new(0, vec![1]);
        assert_eq!(c.direction_between(&anchor, &child), Direction::D);
        assert_eq!(c.direction_between(&child, &anchor), Direction::U);
        assert_eq!(
            c.direction_between(&child, &Position::new(0, vec![0])),
            Direction::L
        );
        assert_eq!(
            c.direction_between(&anchor, &Position::new(1, vec![2])),
            Direction::R
        );
    }
}

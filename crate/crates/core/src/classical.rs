//! Closed-form classical hitting times on locally embedded hypercubes.
//!
//! The embedded cube maps onto a line of `d+1` Hamming-weight classes, each
//! carrying an effective external graph with `e_x` outgoing edges. With
//! `α_x = e_x/d + 1` the corner-to-corner hitting time telescopes to
//!
//! ```text
//! τ(0) = Σ_{k=0}^{d-1} [ Σ_{i=0}^{k} C(d,i) α_i ] / C(d-1,k)
//! ```
//!
//! (the intermediate differences `Δ(x) = τ(x) - τ(x+1)` only appear in that
//! derivation). All functions are generic over [`Field`]; the topology-level
//! entry point [`classical_hitting`] works in exact rationals.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;

use crate::error::ClassicalError;
use crate::scalar::Field;
use crate::topology::{f_e, structure_degree_sum, Canonical, WalkTopology};

/// Binomial coefficients `C(n, 0..=n)` by the multiplicative recurrence.
pub fn binomial_row(n: usize) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for k in 1..=n {
        c = c * BigUint::from(n + 1 - k) / BigUint::from(k);
        row.push(c.clone());
    }
    row
}

/// Per-weight `α_x` values of an embedded cube of dimension `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaProfile<T> {
    d: usize,
    alpha: Vec<T>,
}

impl<T: Field> AlphaProfile<T> {
    /// Builds the profile from per-weight outgoing-edge counts `e_0..e_{d-1}`.
    pub fn from_edges(edges: &[T]) -> Self {
        let d = edges.len();
        assert!(d >= 1, "profile needs at least one weight class");
        let dd = T::from_u64(d as u64);
        let alpha = edges
            .iter()
            .map(|e| e.clone() / dd.clone() + T::one())
            .collect();
        Self { d, alpha }
    }

    /// Uses `alpha` verbatim; every value must be at least one.
    pub fn from_alpha(alpha: Vec<T>) -> Self {
        assert!(!alpha.is_empty(), "profile needs at least one weight class");
        assert!(
            alpha.iter().all(|a| *a >= T::one()),
            "alpha values below one are not reachable from edge counts"
        );
        Self {
            d: alpha.len(),
            alpha,
        }
    }

    pub fn uniform(d: usize, alpha: T) -> Self {
        Self::from_alpha(vec![alpha; d])
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn alpha(&self) -> &[T] {
        &self.alpha
    }
}

/// Mean excursion time through an external graph with `e` outgoing edges
/// attached by `l` legs.
pub fn return_time<T: Field>(e: u64, l: u64) -> Result<T, ClassicalError> {
    if l == 0 {
        return Err(ClassicalError::ZeroLegs);
    }
    if e < 2 * l {
        return Err(ClassicalError::TooFewEdges { e, min: 2 * l });
    }
    Ok(T::from_u64(e) / T::from_u64(l))
}

/// Corner-to-corner hitting time for an arbitrary alpha profile.
pub fn tau_general<T: Field>(profile: &AlphaProfile<T>) -> T {
    let d = profile.d;
    let row_d = binomial_row(d);
    let row_dm1 = binomial_row(d - 1);
    let mut prefix = T::zero();
    let mut total = T::zero();
    for k in 0..d {
        prefix = prefix + T::from_biguint(&row_d[k]) * profile.alpha[k].clone();
        total = total + prefix.clone() / T::from_biguint(&row_dm1[k]);
    }
    total
}

/// Hitting time of the ordinary cube from the all-zeros corner.
pub fn tau_ord<T: Field>(d: usize) -> T {
    tau_general(&AlphaProfile::uniform(d, T::one()))
}

/// Hitting time of the ordinary cube from a vertex of weight `d-1`:
/// `2^d - 1`.
pub fn tau_ord_penultimate<T: Field>(d: usize) -> T {
    T::from_biguint(&((BigUint::one() << d) - 1u32))
}

/// Hitting time when every weight class carries `mean_e` outgoing edges:
/// `(⟨E⟩/d + 1) τ_ord(0)`.
pub fn tau_uniform<T: Field>(d: usize, mean_e: T) -> T {
    alpha_for(d, mean_e) * tau_ord::<T>(d)
}

/// `(⟨E⟩/d + 1) τ_ord(d-1)`, the same walk started one step from the target.
pub fn tau_uniform_penultimate<T: Field>(d: usize, mean_e: T) -> T {
    alpha_for(d, mean_e) * tau_ord_penultimate::<T>(d)
}

fn alpha_for<T: Field>(d: usize, mean_e: T) -> T {
    mean_e / T::from_u64(d as u64) + T::one()
}

/// Exact classical corner-to-corner hitting time for a topology.
///
/// Loop-free unless the topology is bare or tails; the target's external
/// graph never contributes.
pub fn classical_hitting(topology: &WalkTopology) -> Result<BigRational, ClassicalError> {
    let canonical = topology.canonical();
    if topology.self_loops() && matches!(canonical, Canonical::Concat { .. }) {
        return Err(ClassicalError::UnsupportedLoops);
    }
    let exact = |v: &BigUint| BigRational::from_biguint(v);
    Ok(match canonical {
        Canonical::Bare { d } => tau_ord(d),
        Canonical::Tails { d, .. } => {
            let e = topology.total_outgoing_edges(topology.self_loops());
            tau_uniform(d, exact(&e))
        }
        Canonical::Concat {
            dims,
            penetrate: false,
        } => tau_uniform(dims[0], exact(&f_e(1, &dims))),
        Canonical::Concat {
            dims,
            penetrate: true,
        } => penetration_hitting(&dims),
    })
}

/// Sum of corner-to-corner legs from the outermost start corner down to the
/// central cube and back out to the outermost target corner.
fn penetration_hitting(dims: &[usize]) -> BigRational {
    let m = dims.len() - 1;
    let exact = |v: &BigUint| BigRational::from_biguint(v);
    let mut total = BigRational::from_integer(0.into());
    // inward: level m, .., 1, then the central cube; every non-anchor vertex
    // carries the subtree one level deeper
    for level in (0..=m).rev() {
        total += tau_uniform(dims[level], exact(&f_e(level + 1, dims)));
    }
    // outward: from the anchor (which sees the rest of the structure) to the
    // weight-0 corner of each level-j cube on the target's branch
    let everything = structure_degree_sum(dims);
    for (j, &dj) in dims.iter().enumerate().skip(1) {
        let mut edges = vec![exact(&f_e(j + 1, dims)); dj];
        edges[0] = exact(&(&everything - f_e(j, dims)));
        total += tau_general(&AlphaProfile::from_edges(&edges));
    }
    total
}

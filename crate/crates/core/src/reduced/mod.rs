//! Symmetry-reduced quantum walk engine.
//!
//! The walk starts uniformly over all directions at the start corner, so it
//! never leaves the subspace of states symmetric under the automorphisms
//! fixing both endpoints. That subspace has a basis of one state per
//! (effective direction, collapsed position) pair, and its dimension grows
//! polynomially where the full space grows exponentially.

mod basis;
mod exact;
mod operator;
mod walk;

pub use basis::{build_basis, initial_amplitudes, ReducedBasis, ReducedState, WeightTable};
pub use exact::expected_hitting_exact;
pub use operator::{WalkOperator, UNITARITY_TOLERANCE};
pub use walk::{
    conditional_hitting, convergence_check, default_max_steps, hit_probabilities,
    run_measured_walk, run_measured_walk_traced, Evolution, HittingSummary, MeasuredWalk,
    CONVERGENCE_GAP, DEFAULT_MAX_STEPS, STALL_RISE,
};

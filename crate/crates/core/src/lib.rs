//! Classical and quantum corner-to-corner hitting times on hypercubes that
//! are locally embedded into larger graphs.
//!
//! * [`topology`] describes the embeddings and their scalar properties,
//!   [`graph`] materializes them.
//! * [`classical`] evaluates the closed-form classical hitting times in
//!   exact arithmetic; [`markov`] holds the brute-force classical oracles.
//! * [`reduced`] runs the Grover-coined measured walk on the symmetric
//!   subspace; [`full`] runs the same walk on the whole state space.
//!
//! The numerics are generic over the scalar type ([`Field`] for the
//! classical side, [`Real`] for amplitudes); the aliases below fix the
//! common choices.

pub mod classical;
pub mod error;
pub mod full;
pub mod graph;
pub mod markov;
pub mod reduced;
pub mod scalar;
pub mod topology;

pub use classical::{
    binomial_row, classical_hitting, return_time, tau_general, tau_ord, tau_ord_penultimate,
    tau_uniform, tau_uniform_penultimate, AlphaProfile,
};
pub use error::{ClassicalError, StructureError, WalkError};
pub use full::{
    build_full_walk, certify_weights, run_full_measured_walk, FullWalk, ShiftPermutation,
};
pub use graph::{build_explicit_graph, ExplicitGraph, MAX_EXPLICIT_VERTICES};
pub use markov::{first_return_by_passage, markov_first_passage, stationary_return};
pub use reduced::{
    build_basis, conditional_hitting, convergence_check, default_max_steps,
    expected_hitting_exact, run_measured_walk, Evolution, HittingSummary, ReducedBasis,
    ReducedState, WalkOperator, WeightTable,
};
pub use scalar::{rational_to_f64, Field, Real};
pub use topology::{
    f_e, structure_degree_sum, Direction, Position, TopologyKind, WalkMode, WalkTopology,
};

/// Exact rational used for classical hitting times.
pub type ExactRational = num_rational::BigRational;
pub type AlphaProfileExact = AlphaProfile<ExactRational>;
pub type WalkOperator64 = WalkOperator<f64>;
pub type WalkOperator32 = WalkOperator<f32>;
pub type FullWalk64 = FullWalk<f64>;
pub type HittingSummary64 = HittingSummary<f64>;
pub type Amplitude64 = num_complex::Complex<f64>;

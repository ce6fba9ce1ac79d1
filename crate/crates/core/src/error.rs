use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("invalid topology: {0}")]
    InvalidTopology(String),
    #[error("explicit graph would have {count} vertices (limit {limit})")]
    SizeExceeded { count: u128, limit: u128 },
    #[error("cannot parse topology: {0}")]
    Parse(String),
    #[error("graph is not regular: vertex {vertex} has degree {found}, expected {expected}")]
    NotRegular {
        vertex: usize,
        found: usize,
        expected: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassicalError {
    #[error("return time needs at least one leg")]
    ZeroLegs,
    #[error("edge count {e} is below the 2l = {min} contributed by the legs")]
    TooFewEdges { e: u64, min: u64 },
    #[error("loop-adjusted classical walks are only supported for tails")]
    UnsupportedLoops,
    #[error("first-passage system is singular: target unreachable")]
    SingularSystem,
    #[error(transparent)]
    Structure(#[from] StructureError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WalkError {
    #[error("walk operator is not unitary (max deviation {deviation:e})")]
    NonUnitary { deviation: f64 },
    #[error("target probability {reached} still below p0 after {steps} steps")]
    MaxStepsExceeded {
        steps: u64,
        reached: f64,
        tau_partial: f64,
    },
    #[error("conditional evolution has a unit-modulus eigenvalue (dark state)")]
    DarkStateDetected,
    #[error("hit probability neither reached p0 nor plateaued within {steps} steps")]
    NoPlateau { steps: u64 },
    #[error("Schur decomposition did not converge")]
    DecompositionFailed,
    #[error("invalid walk parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

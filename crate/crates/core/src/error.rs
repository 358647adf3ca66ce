use thiserror::Error;

/// Errors raised by state construction and the DFS routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("local dimension must be at least {min}, got {got}")]
    InvalidLocalDim { got: usize, min: usize },

    #[error("site count must be at least 1")]
    NoSites,

    #[error("Hilbert space {d}^{n} exceeds the dense limit of 2^20 amplitudes")]
    TooLarge { d: usize, n: usize },

    #[error("expected {expected} amplitudes, got {got}")]
    AmplitudeCount { expected: usize, got: usize },

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("local dimensions differ: {0} vs {1}")]
    LocalDimMismatch(usize, usize),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("site {site} is outside 1..={n}")]
    SiteOutOfRange { site: usize, n: usize },

    #[error("site {0} listed twice")]
    DuplicateSite(usize),

    #[error("empty site set")]
    EmptySiteSet,

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("matrix is not special unitary (|det - 1| = {0:e})")]
    NotSpecial(f64),

    #[error("not a valid density operator: {0}")]
    InvalidDensity(&'static str),

    #[error("no invariant subspace: {d} does not divide {n}")]
    NoInvariantSubspace { n: usize, d: usize },

    #[error("invalid grouping: {0}")]
    InvalidGrouping(&'static str),

    #[error("state is outside the decoherence-free subspace (deviation {0:e})")]
    NotInvariant(f64),

    #[error("pseudospin outcome {0} cannot come from a single-loss branch")]
    NonDfsProvenance(i32),

    #[error("pseudospin measurement has no definite outcome")]
    IndefiniteSyndrome,

    #[error("input port {0} holds no photon")]
    EmptyPort(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),

    #[error("numerical failure: {0}")]
    Numerical(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by the constructions and checkers in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("face {face:?} lists vertex {vertex:?} more than once")]
    DuplicateVertex { face: Vec<String>, vertex: String },

    #[error("{0} is not a face of the complex")]
    NotAFace(String),

    #[error("complex has {faces} faces, above the isomorphism search bound of {bound}")]
    SizeBoundExceeded { faces: usize, bound: usize },

    #[error("isomorphism search gave up after {0} refinement nodes")]
    SearchBudgetExhausted(usize),

    #[error("no connected nlcp complex found after {0} samples")]
    SamplingBudgetExhausted(usize),

    #[error("complex is disconnected")]
    Disconnected,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("selector index {index} out of range for {len} words")]
    SelectorOutOfRange { index: usize, len: usize },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{l} is not a primitive root modulo {q}")]
    NotPrimitive { q: u64, l: u64 },

    #[error("q = {q} does not exceed the valence bound {bound}")]
    ModulusTooSmall { q: u64, bound: usize },

    #[error("walk is not closed: starts at {start} and ends at {end}")]
    OpenPath { start: String, end: String },

    #[error("link mismatch at vertex {0}: incident-cube link differs from the join formula")]
    LinkMismatch(String),

    #[error("two hyperplanes of one direction meet at cube {0}")]
    SameDirectionCrossing(usize),

    #[error("level-set homology violates the coning conclusion: {0}")]
    ConingViolation(String),

    #[error("fiber action is not transitive: {0}")]
    NotTransitive(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

use crate::relation::Witness;

/// Errors shared across the whole crate. Every precondition failure that has a
/// forbidden-pattern certificate carries the [`Witness`] so callers can
/// re-check it against the offending input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ground sets differ")]
    GroundSetMismatch,
    #[error("input has a cycle: {0}")]
    CyclicInput(Witness),
    #[error("transitive closure has a symmetric pair: {0}")]
    SymmetricPair(Witness),
    #[error("input is not reflexive (missing loop on {element})")]
    NotReflexive { element: String },
    #[error("relation is not an interval order: {0}")]
    NotIntervalOrder(Witness),
    #[error("relation is not a semiorder: {0}")]
    NotSemiorder(Witness),
    #[error("difference-constraint system infeasible")]
    InfeasibleSystem,
    #[error("saturation round broke acyclicity even with single-pair fallback")]
    InternalSaturationCycle,
    #[error("operator round violated an invariant: {0}")]
    InternalOperatorFailure(String),
    #[error("search budget exhausted after {nodes} nodes")]
    SearchBudgetExhausted { nodes: u64 },
    #[error("no decomposition found; search explored {nodes} nodes exhaustively")]
    NoDecompositionFound { nodes: u64 },
    #[error("member construction failed for augmented pair ({0}, {1}): {2}")]
    MemberConstructionFailed(String, String, Box<Error>),
    #[error("family is empty")]
    EmptyFamily,
    #[error("size limit exceeded: {what} = {value}, cap {cap}")]
    SizeLimit {
        what: &'static str,
        value: usize,
        cap: usize,
    },
    #[error("pair index {index} out of bounds for {n} elements")]
    PairOutOfBounds { index: usize, n: usize },
    #[error("member {index} is not a strict linear order")]
    MemberNotLinear { index: usize },
    #[error("realizer invalid: {detail}")]
    RealizerInvalid { detail: String },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown element {label:?}")]
    UnknownElement { label: String },
    #[error("duplicate element {label:?}")]
    DuplicateElement { label: String },
    #[error("unsupported emit combination: {0}")]
    UnsupportedCombination(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// The certificate attached to this error, if any.
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Error::CyclicInput(w)
            | Error::SymmetricPair(w)
            | Error::NotIntervalOrder(w)
            | Error::NotSemiorder(w) => Some(w),
            _ => None,
        }
    }
}

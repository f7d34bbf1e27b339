//! Shared error type for all modules.

use thiserror::Error;

/// Errors surfaced by graph construction, path machinery, interventions,
/// identification, the oracle, and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("directed cycle through vertex `{0}`")]
    Cycle(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0} -> {1}`")]
    UnknownEdge(String, String),
    #[error("self-loop on vertex `{0}`")]
    SelfLoop(String),
    #[error("cardinality of `{0}` must be at least 2")]
    BadCardinality(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("path set not proper: `{0}` is a prefix of `{1}`")]
    NotProper(String, String),
    #[error("invalid path `{0}`: {1}")]
    BadPath(String, String),
    #[error("value {value} out of range for vertex `{vertex}` (cardinality {card})")]
    ValueOutOfRange {
        vertex: String,
        value: usize,
        card: usize,
    },
    #[error("intervention is not natural for the outcome set (offending path `{0}`)")]
    NotNatural(String),
    #[error("path intervention is not edge consistent (offending edge `{0}`)")]
    NotEdgeConsistent(String),
    #[error("edge intervention is not node consistent (offending vertex `{0}`)")]
    NotNodeConsistent(String),
    #[error("graph must be a DAG for this operation (bidirected edge present)")]
    NotADag,
    #[error("input restriction violated: {0}")]
    InputRestriction(String),
    #[error("district conditions fail: {0}")]
    ConditionsFail(String),
    #[error("variable mismatch: {0}")]
    VariableMismatch(String),
    #[error("invalid structural model: {0}")]
    BadModel(String),
    #[error("witness construction failed verification: {0}")]
    SearchFailed(String),
    #[error("positivity violation: {0}")]
    PositivityViolation(String),
    #[error("empty dataset")]
    EmptyData,
    #[error("parse error at line {line}, column {col}: {msg} (near `{token}`)")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
        token: String,
    },
    #[error("{0}")]
    Semantic(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

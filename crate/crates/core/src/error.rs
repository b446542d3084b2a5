//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid body: {0}")]
    InvalidBody(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The given directions span a proper subspace, so the measure would be
    /// concentrated on a great subsphere.
    #[error("directions span a proper subspace of R^{dim}")]
    GreatSubsphere { dim: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty cell: halfspace intersection is empty")]
    EmptyCell,

    #[error("linear program is unbounded in the probed direction")]
    UnboundedDirection,

    #[error("linear program solver failed: {0}")]
    SolverFailure(String),

    #[error("root bracketing failed: {0}")]
    BracketFailure(String),

    #[error("cell still touches the window after {0} radius doublings")]
    WindowExhausted(usize),

    #[error("degenerate cell geometry: {0}")]
    DegenerateCell(String),

    #[error("acceptance budget exceeded: accepted {accepted} of {target} after {draws} draws")]
    AcceptanceBudget {
        accepted: usize,
        target: usize,
        draws: usize,
    },

    #[error("replication {index} failed: {source}")]
    Replication {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

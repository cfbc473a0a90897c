use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error on line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("invalid graph: {0}")]
    Validation(String),

    #[error("invalid cycle literal `{literal}`: {message}")]
    CycleLiteral { literal: String, message: String },

    #[error("vertex subset is empty")]
    EmptySubset,

    #[error("cycles belong to different graphs")]
    GraphMismatch,

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("`{0}` and `{1}` are not adjacent")]
    NotAnEdge(String, String),

    #[error("search box has {required} points, node budget is {budget}")]
    BoxTooLarge { required: String, budget: u64 },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("hypothesis failed at vertex `{vertex}`: {message}")]
    HypothesisFailed { vertex: String, message: String },

    #[error("oracle table: {0}")]
    OracleIncomplete(String),

    #[error("negative coefficient {value} at vertex `{vertex}`")]
    NegativeCoefficient { vertex: String, value: String },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn syntax(line: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn precondition(message: impl Into<String>) -> Self {
        Error::PreconditionFailed(message.into())
    }
}

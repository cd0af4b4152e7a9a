use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Parse(String),

    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),

    #[error("vertex label {label} outside 1..={max}")]
    LabelOutOfRange { label: usize, max: usize },

    #[error("graph has {got} vertices, limit for this operation is {limit}")]
    TooManyVertices { got: usize, limit: usize },

    #[error("graph has isolated vertices (labels {0:?})")]
    IsolatedVertices(Vec<usize>),

    #[error("graph is not connected")]
    Disconnected,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no sign change of the difference on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("density underflows to zero at beta = {beta}")]
    Underflow { beta: f64 },

    #[error("search budget of {budget} nodes exceeded after {visited} nodes")]
    BudgetExceeded { budget: u64, visited: u64 },

    #[error("count overflowed 128-bit integer")]
    Overflow,

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by caller-supplied input (as opposed to
    /// resource limits or internal faults).
    pub fn is_invalid_input(&self) -> bool {
        !matches!(
            self,
            Error::BudgetExceeded { .. } | Error::Overflow | Error::Internal(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

use crate::treedecomp::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown argument `{0}`")]
    UnknownArgument(String),

    #[error("invalid argument name `{0}`")]
    InvalidName(String),

    #[error("duplicate {0}")]
    Duplicate(String),

    #[error("probability {value} for {element} is outside (0, 1]")]
    ProbabilityRange { element: String, value: String },

    #[error("set is not conflict-free")]
    NotConflictFree,

    #[error("subframework is not a member of F_P: {0}")]
    NotCertainRespecting(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid tree decomposition: {}", format_violations(.0))]
    InvalidDecomposition(Vec<Violation>),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("time budget exhausted")]
    Timeout,

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Capacity and timeout failures are resource limits, everything else is bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::Capacity(_) | Error::Timeout)
    }
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Bad arguments: out-of-range vertices, length mismatches, parameter ranges.
    #[error("input error: {0}")]
    Input(String),

    /// Malformed graph file. Line numbers are 1-based; graph6 reports line 1.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// The target format cannot represent the graph (loops in graph6).
    #[error("unsupported feature: {0}")]
    Unsupported(String),

    /// A function was called on inputs violating its contract.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A size guard or enumeration cap was exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// The search budget ran out before the exact answer was known.
    #[error("search budget exhausted (known bounds: {lower}..={upper})")]
    Timeout { lower: usize, upper: usize },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// Short machine-readable tag used in CLI error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Input(_) => "input",
            Error::Parse { .. } => "parse",
            Error::Unsupported(_) => "unsupported",
            Error::Precondition(_) => "precondition",
            Error::Resource(_) => "resource",
            Error::Timeout { .. } => "timeout",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

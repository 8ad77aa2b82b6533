use thiserror::Error;

/// Errors raised by the library.
///
/// The variants map onto the command-line exit codes: parse failures are
/// reported separately from budget overruns, everything else is a domain or
/// contract violation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A caller violated a precondition of an operation.
    #[error("contract violation: {0}")]
    Contract(String),
    /// A decimal rotation number cannot decide an interval membership.
    #[error("ambiguous evaluation: {0}")]
    Ambiguity(String),
    /// A rotation number turned out to be rational.
    #[error("rational rotation number: {0}")]
    Rationality(String),
    /// An enumeration or search exceeded its budget.
    #[error("budget exceeded: {0}")]
    Budget(String),
    /// Malformed textual input. `line` is 1-based when known.
    #[error("parse error{}: {msg}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Parse { line: Option<usize>, msg: String },
}

impl Error {
    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse {
            line: None,
            msg: msg.into(),
        }
    }

    pub(crate) fn parse_at(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line: Some(line),
            msg: msg.into(),
        }
    }

    /// Attach a line number to a parse error that does not carry one yet.
    pub(crate) fn at_line(self, line: usize) -> Self {
        match self {
            Error::Parse { line: None, msg } => Error::Parse {
                line: Some(line),
                msg,
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by the solvers, the signal model and the experiment harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("column {0} has zero norm")]
    ZeroColumn(usize),

    #[error("angle {0} deg outside [-90, 90)")]
    AngleOutOfRange(f64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid weight {value} at index {index}")]
    InvalidWeight { index: usize, value: f64 },

    #[error("homotopy stalled at knot {knot}: {reason}")]
    Stalled { knot: usize, reason: String },

    #[error("every alpha value stalled: {0}")]
    AllAlphasStalled(String),

    #[error("SAEN stage {stage} failed: {source}")]
    Stage {
        stage: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("support size mismatch: expected {expected}, found {found}")]
    SupportSize { expected: usize, found: usize },

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}

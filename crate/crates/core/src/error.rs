use thiserror::Error;

/// Every failure the library reports. The CLI maps these onto exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("digit set has {size} elements, above the cap of {cap}; supply a verified custom digit set")]
    DigitSetTooLarge { size: usize, cap: usize },

    #[error("spanning axiom {axiom} fails on digits {tuple:?}")]
    AxiomViolation { axiom: String, tuple: Vec<usize> },

    #[error("subset construction exceeded {cap} states")]
    StateBlowup { cap: usize },

    #[error("carry of height {height} exceeds bound {bound}")]
    CarryBoundExceeded { height: u64, bound: u64 },

    #[error("cap exceeded: {what} (observed {observed}, cap {cap})")]
    CapExceeded { what: String, observed: String, cap: String },

    #[error("language is not sparse")]
    NotSparse,

    #[error("point has coordinates outside the ground field")]
    NotInGroundField,

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. }
            | Error::Validation(_)
            | Error::DigitSetTooLarge { .. }
            | Error::AxiomViolation { .. }
            | Error::NotSparse
            | Error::NotInGroundField
            | Error::Io(_) => 2,
            Error::StateBlowup { .. } | Error::CapExceeded { .. } | Error::CarryBoundExceeded { .. } => 3,
            Error::Internal(_) => 4,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Validation(format!("json: {e}"))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid box: {0}")]
    InvalidBox(String),

    #[error("invalid grid point: {0}")]
    InvalidGridPoint(String),

    #[error("invalid cell: {0}")]
    InvalidCell(String),

    #[error("invalid delta: {0}")]
    InvalidDelta(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dimension {0} too large for corner enumeration (max 20)")]
    DimensionTooLarge(usize),

    #[error("point {point:?} lies outside the domain of {objective}")]
    OutOfDomain { objective: String, point: Vec<f64> },

    #[error("gradient unavailable for {0}")]
    GradientUnavailable(String),

    #[error("unknown objective `{0}`")]
    UnknownObjective(String),

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown function `{name}` at byte {offset}")]
    UnknownFunction { name: String, offset: usize },

    #[error("variable x{index} out of range (dimension {dim})")]
    VariableOutOfRange { index: usize, dim: usize },

    #[error("evaluation error: {0}")]
    Evaluation(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("grid too large: {0} points exceeds the 10^7 limit")]
    GridTooLarge(u128),

    #[error("{0}")]
    Io(String),
}

impl Error {
    /// Process exit status for the command-line tool: 2 for configuration
    /// problems, 3 for objective and expression problems, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::UnknownObjective(_)
            | Error::Syntax { .. }
            | Error::UnknownFunction { .. }
            | Error::VariableOutOfRange { .. }
            | Error::OutOfDomain { .. }
            | Error::Evaluation(_)
            | Error::GradientUnavailable(_) => 3,
            Error::Io(_) => 1,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

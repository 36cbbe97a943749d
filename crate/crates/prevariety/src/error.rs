use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operation requires a nonempty region")]
    EmptyRegion,

    #[error("polytope {0} has no edges: its tropical hypersurface is empty, so the prevariety is empty")]
    DegenerateFan(usize),

    #[error("no injective orientation vector found after {0} draws")]
    DegenerateOrientation(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("relation tables built over different fan layouts")]
    LayoutMismatch,

    #[error("oracle refinement too large: {0}")]
    OracleTooLarge(String),

    #[error("worker panicked: {0}")]
    WorkerPanic(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code classification for the command-line driver: problems with
    /// the user's input exit 1, everything else is an internal failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_)
            | Error::Parse { .. }
            | Error::DegenerateFan(_)
            | Error::DimensionMismatch { .. } => 1,
            _ => 2,
        }
    }
}

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero in GF(p)")]
    DivisionByZero,

    #[error("{0} is not an odd prime below 2^31")]
    InvalidPrime(u32),

    #[error("no order-{level} root of unity mod {p} ({level} does not divide p - 1 = {})", p - 1)]
    NoRootOfUnity { level: u32, p: u32 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("no generic center found: {0}")]
    NoGenericCenter(String),

    #[error("no extra syzygy at position ({0}, 1)")]
    NoExtraSyzygy(usize),

    #[error("regularity undetermined: {0}")]
    Undetermined(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Process exit status used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) | Error::InvalidPrime(_) | Error::Parse(_) => 2,
            Error::NoRootOfUnity { .. } | Error::DegenerateSample(_) | Error::NoGenericCenter(_) => 3,
            Error::NoExtraSyzygy(_) => 4,
            Error::Io(_) | Error::Json(_) => 5,
            Error::DivisionByZero | Error::Undetermined(_) | Error::Internal(_) => 1,
        }
    }
}

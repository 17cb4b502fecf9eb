use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not square: {entries} entries for dimension {dim}")]
    NotSquare { dim: usize, entries: usize },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("operation supports dimension 2 only, got {0}")]
    UnsupportedDimension(usize),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("trace is {0}, expected 1")]
    TraceNotUnit(f64),

    #[error("matrix is not positive semidefinite (smallest eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("Bloch vector norm {0} exceeds 1")]
    InvalidBlochVector(f64),

    #[error("channel has no Kraus operators")]
    EmptyChannel,

    #[error("Kraus operators violate completeness (max deviation {0:e})")]
    Incomplete(f64),

    #[error("invalid value {value} for parameter `{name}`: {reason}")]
    InvalidParameter {
        name: String,
        value: f64,
        reason: &'static str,
    },

    #[error("unknown channel `{0}`")]
    UnknownChannel(String),

    #[error("missing parameter `{param}` for channel `{channel}`")]
    MissingParameter { channel: String, param: String },

    #[error("unexpected parameter `{param}` for channel `{channel}`")]
    UnexpectedParameter { channel: String, param: String },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("imaginary residue {0:e} in a quantity that must be real")]
    ImaginaryResidue(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    pub(crate) fn param(name: &str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name: name.to_string(),
            value,
            reason,
        }
    }
}

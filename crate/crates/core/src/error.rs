use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("operator not normal (commutator norm {commutator:.3e})")]
    NotNormal { commutator: f64 },

    #[error("not positive semidefinite (min eig {min_eig})")]
    NotPsd { min_eig: f64 },

    #[error("operator polynomial singular at lambda = {lambda} (min singular value {min_sv:.3e})")]
    Singular { lambda: f64, min_sv: f64 },

    #[error("numerical error: {0}")]
    Numerical(String),

    /// A model was refused because an existence condition fails.
    #[error("refused: condition {condition} fails: {reason}")]
    Refused { condition: String, reason: String },

    #[error("format error: {0}")]
    Format(String),

    #[error("configuration invalid:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn is_refusal(&self) -> bool {
        matches!(self, Error::Refused { .. })
    }
}

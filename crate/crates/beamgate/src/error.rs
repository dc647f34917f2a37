//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Lattice geometry that violates a layout invariant.
    #[error("invalid layout: {0}")]
    InvalidLayout(String),

    /// Cell or basis index outside `0..n`.
    #[error("index out of range: {context} (got {index}, limit {limit})")]
    IndexOutOfRange {
        context: &'static str,
        index: usize,
        limit: usize,
    },

    /// Operand shapes disagree.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The grid cannot resolve the requested propagation distance: too much
    /// spectral energy sits beyond the anti-aliasing limit.
    #[error(
        "Nyquist violation: {fraction:.3e} of spectral energy beyond the \
         anti-alias limit for distance {distance} m (threshold {threshold:.1e}); \
         use a finer grid, wider aperture or shorter distance"
    )]
    NyquistViolation {
        distance: f64,
        fraction: f64,
        threshold: f64,
    },

    /// Deutsch-Jozsa input that is neither constant nor balanced.
    #[error("boolean function is neither constant nor balanced")]
    NeitherConstantNorBalanced,

    /// Malformed input file (CSV/JSON matrices, vectors, configs).
    #[error("parse error: {0}")]
    Parse(String),

    /// Out-of-contract argument such as a negative distance.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A stage produced or received a non-finite or empty field.
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI; each variant maps to a documented code.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::DimensionMismatch(_) => 3,
            Error::NyquistViolation { .. } => 4,
            Error::NeitherConstantNorBalanced => 5,
            Error::InvalidLayout(_) | Error::IndexOutOfRange { .. } | Error::InvalidArgument(_) => {
                6
            }
            Error::InvalidField(_) => 7,
            Error::Io(_) => 1,
        }
    }

    /// Short machine-parsable tag used on the diagnostic stream.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::DimensionMismatch(_) => "dimension-mismatch",
            Error::NyquistViolation { .. } => "nyquist-violation",
            Error::NeitherConstantNorBalanced => "neither-function",
            Error::InvalidLayout(_) => "invalid-layout",
            Error::IndexOutOfRange { .. } => "index-out-of-range",
            Error::InvalidArgument(_) => "invalid-argument",
            Error::InvalidField(_) => "invalid-field",
            Error::Io(_) => "io",
        }
    }
}

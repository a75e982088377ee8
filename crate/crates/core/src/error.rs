use thiserror::Error;

/// Errors produced by the symbolic and numeric routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("unsupported denominator: factor `{factor}` has no root in the parameter field")]
    UnsupportedDenominator { factor: String },

    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid system description: {0}")]
    Schema(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("duplicate derivation `{0}`")]
    DuplicateDerivation(String),

    #[error("operators use different derivations")]
    MixedDerivations,

    #[error("zero operator where a nonzero operator is required")]
    ZeroOperator,

    #[error("missing matrix for derivation `{0}`")]
    MissingMatrix(String),

    #[error("matrix is not traceless")]
    NotTraceless,

    #[error("expected exactly one parameter, found {0}")]
    ParameterCount(usize),

    #[error("value depends on the main variable where a parameter-only value is required")]
    DependsOnMainVariable,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("path passes too close to a singularity: {0}")]
    PathTooClose(String),

    #[error("evaluation failed: {0}")]
    EvalError(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable variant name for structured output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::UnknownVariable(_) => "UnknownVariable",
            Error::UnsupportedDenominator { .. } => "UnsupportedDenominator",
            Error::Parse { .. } => "Parse",
            Error::Schema(_) => "Schema",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::DuplicateDerivation(_) => "DuplicateDerivation",
            Error::MixedDerivations => "MixedDerivations",
            Error::ZeroOperator => "ZeroOperator",
            Error::MissingMatrix(_) => "MissingMatrix",
            Error::NotTraceless => "NotTraceless",
            Error::ParameterCount(_) => "ParameterCount",
            Error::DependsOnMainVariable => "DependsOnMainVariable",
            Error::Unsupported(_) => "Unsupported",
            Error::PathTooClose(_) => "PathTooClose",
            Error::EvalError(_) => "EvalError",
            Error::Io(_) => "Io",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use thiserror::Error;

/// Domain errors with stable machine-readable codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("row is not unimodular: {0}")]
    NotUnimodular(String),
    #[error("element is not a unit modulo the ideal (gcd witness: {0})")]
    NotAUnit(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("row too short: {0}")]
    RowTooShort(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("module mismatch: {0}")]
    ModuleMismatch(String),
    #[error("ideal chain violation: {0}")]
    IdealChainViolation(String),
    #[error("elements are not inverses: {0}")]
    NotInverses(String),
    #[error("not a generating vector: {0}")]
    NotGenerating(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("schema error: {0}")]
    Schema(String),
}

impl Error {
    /// Stable error code used in machine-readable CLI output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::RingMismatch(_) => "RingMismatch",
            Error::NotUnimodular(_) => "NotUnimodular",
            Error::NotAUnit(_) => "NotAUnit",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::RowTooShort(_) => "RowTooShort",
            Error::BudgetExceeded(_) => "BudgetExceeded",
            Error::ModuleMismatch(_) => "ModuleMismatch",
            Error::IdealChainViolation(_) => "IdealChainViolation",
            Error::NotInverses(_) => "NotInverses",
            Error::NotGenerating(_) => "NotGenerating",
            Error::Unsupported(_) => "Unsupported",
            Error::Schema(_) => "SchemaError",
        }
    }

    /// Process exit status for the CLI: 2 for schema problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Schema(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

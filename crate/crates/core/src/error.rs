use thiserror::Error;

/// Errors shared across the library. Stable `code()` strings are used by the
/// CLI so scripted callers can match on them.
#[derive(Debug, Error)]
pub enum Error {
    #[error("negative radicand: only real quadratic fields are supported")]
    NegativeRadicand,
    #[error("field mismatch: cannot combine sqrt({0}) with sqrt({1})")]
    FieldMismatch(u64, u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("disconnected surface")]
    Disconnected,
    #[error("invalid surface: {0}")]
    InvalidSurface(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("periodicity undetermined: trace budget {0} exhausted")]
    PeriodicityUndetermined(usize),
    #[error("direction not parabolic: {0}")]
    NotParabolic(String),
    #[error("point is a cone point")]
    ConePointStart,
    #[error("operation requires a surface with covering structure")]
    NoCoveringStructure,
    #[error("no affine involution found")]
    NoInvolution,
    #[error("search budget exhausted after {0} states")]
    BudgetExhausted(usize),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// Short machine-readable code, stable across releases.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NegativeRadicand => "negative-radicand",
            Error::FieldMismatch(..) => "field-mismatch",
            Error::Parse(_) => "parse",
            Error::Disconnected => "disconnected",
            Error::InvalidSurface(_) => "invalid-surface",
            Error::Degenerate(_) => "degenerate",
            Error::PeriodicityUndetermined(_) => "periodicity-undetermined",
            Error::NotParabolic(_) => "not-parabolic",
            Error::ConePointStart => "cone-point-start",
            Error::NoCoveringStructure => "no-covering",
            Error::NoInvolution => "no-involution",
            Error::BudgetExhausted(_) => "budget-exhausted",
            Error::Unsupported(_) => "unsupported",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

//! Stable exit-code table.

use perron_core::Error;

pub const OK: i32 = 0;
pub const USAGE: i32 = 2;
pub const NOT_PERRON: i32 = 3;
pub const PRECISION: i32 = 4;
pub const BUDGET: i32 = 5;
pub const CERTIFICATION: i32 = 6;
pub const THRESHOLD: i32 = 7;
pub const IO: i32 = 8;
pub const NOT_FOUND: i32 = 9;
pub const VERIFY_FAILED: i32 = 10;

/// Failure of a subcommand: a library error, an I/O problem, or a failed
/// verification.
#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(String),
    Verify(Vec<String>),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Core(e) => core_code(e),
            CliError::Io(_) => IO,
            CliError::Verify(_) => VERIFY_FAILED,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => match e {
                Error::Parse(_) => "parse",
                Error::InvalidInput(_) => "invalid_input",
                Error::NotIrreducible(_) => "not_irreducible",
                Error::PrecisionExhausted { .. } => "precision_exhausted",
                Error::NotPerron(_) => "not_perron",
                Error::Indeterminate { .. } => "indeterminate",
                Error::InvalidBasis(_) => "invalid_basis",
                Error::PositivityFailed { .. } => "positivity_failed",
                Error::NotInvariant { .. } => "not_invariant",
                Error::BudgetExceeded { .. } => "budget_exceeded",
                Error::NotInSemigroup => "not_in_semigroup",
                Error::DivisionInexact => "division_inexact",
                Error::CertificationFailed(_) => "certification_failed",
                Error::ThresholdNotMet { .. } => "threshold_not_met",
                Error::DimensionTooLarge { .. } => "dimension_too_large",
                Error::DegenerateMatrix => "degenerate_matrix",
                Error::NotFound(_) => "not_found",
            },
            CliError::Io(_) => "io",
            CliError::Verify(_) => "verify_failed",
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Io(m) => m.clone(),
            CliError::Verify(fails) => format!("verification failed: {}", fails.join("; ")),
        }
    }

    pub fn diagnostic(&self) -> serde_json::Value {
        serde_json::json!({
            "error": self.kind(),
            "message": self.message(),
            "exit_code": self.code(),
        })
    }
}

fn core_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::InvalidInput(_) | Error::InvalidBasis(_) => USAGE,
        Error::NotIrreducible(_) | Error::NotPerron(_) => NOT_PERRON,
        Error::PrecisionExhausted { .. } | Error::Indeterminate { .. } => PRECISION,
        Error::BudgetExceeded { .. } | Error::DimensionTooLarge { .. } => BUDGET,
        Error::PositivityFailed { .. }
        | Error::NotInvariant { .. }
        | Error::NotInSemigroup
        | Error::DivisionInexact
        | Error::CertificationFailed(_)
        | Error::DegenerateMatrix => CERTIFICATION,
        Error::ThresholdNotMet { .. } => THRESHOLD,
        Error::NotFound(_) => NOT_FOUND,
    }
}

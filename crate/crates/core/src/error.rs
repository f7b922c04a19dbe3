use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot parse polynomial: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("polynomial rejected: {0}")]
    NotIrreducible(String),

    #[error("root isolation failed at {bits} bits of precision")]
    PrecisionExhausted { bits: u32 },

    #[error("not a Perron number: {0}")]
    NotPerron(String),

    #[error("Perron property undecided at {bits} bits (conjugate moduli not separated)")]
    Indeterminate { bits: u32 },

    #[error("integral basis rejected: {0}")]
    InvalidBasis(String),

    #[error("rounded generator {index} is not in the positive half-space")]
    PositivityFailed { index: usize },

    #[error("cone is not invariant: image of generator {index} lies outside the cone")]
    NotInvariant { index: usize },

    #[error("budget of {budget} exceeded ({found} found so far)")]
    BudgetExceeded { budget: u64, found: u64 },

    #[error("vector is not in the semigroup of the cone")]
    NotInSemigroup,

    #[error("characteristic polynomial is not divisible by the minimal polynomial")]
    DivisionInexact,

    #[error("spectral radius certification failed: {0}")]
    CertificationFailed(String),

    #[error("primitive upgrade needs lambda >= 1 + 4/(1 - rho) = {threshold:.6}, got lambda = {lambda:.6}")]
    ThresholdNotMet { lambda: f64, threshold: f64 },

    #[error("enumeration of {candidates} candidates exceeds the limit {limit}")]
    DimensionTooLarge { candidates: u128, limit: u64 },

    #[error("matrix has a zero row or column")]
    DegenerateMatrix,

    #[error("nothing found: {0}")]
    NotFound(String),
}

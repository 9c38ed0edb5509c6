use thiserror::Error as ThisError;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, ThisError)]
pub enum Error {
    #[error("division by a series without invertible constant term")]
    DivByNonUnit,
    #[error("logarithm of a series whose constant term is not one")]
    LogOfNonUnit,
    #[error("non-finite coefficient at index {index}")]
    NonFinite { index: usize },
    #[error("counts for N{multiplicity} need marker degree {required}, bound is {bound}")]
    MarkerOverflow {
        multiplicity: usize,
        bound: usize,
        required: usize,
    },
    #[error("mixed moments of total depth {depth} are not supported (at most 4)")]
    UnsupportedDepth { depth: usize },
    #[error("enumeration of {walks} walks exceeds the budget of {budget}")]
    BudgetExceeded { walks: u128, budget: u128 },
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("ill-conditioned fit: {0}")]
    IllConditioned(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("independent routes disagree: {0}")]
    RouteMismatch(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivByNonUnit => "DivByNonUnit",
            Error::LogOfNonUnit => "LogOfNonUnit",
            Error::NonFinite { .. } => "NonFinite",
            Error::MarkerOverflow { .. } => "MarkerOverflow",
            Error::UnsupportedDepth { .. } => "UnsupportedDepth",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::Domain(_) => "DomainError",
            Error::IllConditioned(_) => "IllConditioned",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::RouteMismatch(_) => "RouteMismatch",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

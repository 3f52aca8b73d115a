use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("coefficient of {var}^{exponent} lies below the reliable window (tail order {tail})")]
    Truncated { var: String, exponent: i64, tail: i64 },
    #[error("series variables differ: {0} vs {1}")]
    VariableMismatch(String, String),
    #[error("leading coefficient is not a unit")]
    NotInvertible,
    #[error("jet u_{0} was not supplied")]
    MissingJet(usize),
    #[error("depth {available} is too small; at least {needed} is required")]
    DepthExhausted { needed: usize, available: usize },
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("alpha sample {0} hits a pole of the closed formula")]
    PoleCollision(String),
    #[error("division is not exact: {0}")]
    NotDivisible(String),
}

pub type Result<T> = std::result::Result<T, Error>;

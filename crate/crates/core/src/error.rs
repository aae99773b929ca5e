use thiserror::Error;

/// Errors raised by the series kernel and the evaluators built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent {exp} is not a multiple of 1/{denom}")]
    ExponentNotRepresentable { exp: String, denom: u32 },
    #[error("series contexts differ (denominators {0} and {1})")]
    ContextMismatch(u32, u32),
    #[error("series is zero on its window and cannot be inverted")]
    NotInvertible,
    #[error("series known only below q^({have}), comparison needs q^({needed})")]
    InsufficientTruncation { needed: String, have: String },
    #[error("infinite product needs a base with positive exponent, got {0}")]
    NonPositiveBaseExponent(String),
    #[error("series is not formally summable: {0}")]
    NonSummable(String),
    #[error("zero denominator: {0}")]
    ZeroDenominator(String),
    #[error("multi-sum does not converge formally: {0}")]
    DivergentSpec(String),
    #[error("z-window {window} exceeds the configured maximum {max}")]
    WindowOverflow { window: i64, max: i64 },
    #[error("balance condition violated: {0}")]
    BalanceViolated(String),
    #[error("specialization hits a pole: {0}")]
    PoleHit(String),
    #[error("not a Laurent polynomial in z: {0}")]
    NotLaurentPolynomial(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

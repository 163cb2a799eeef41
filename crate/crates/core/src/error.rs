use alloc::string::String;

/// Errors raised by the series, recurrence, and convergence routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("coefficient of lag {lag} has a pole at index {index}")]
    PoleAtIndex { lag: usize, index: i64 },
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("c = {0} is a nonpositive integer")]
    InvalidC(String),
    #[error("lag {lag}: numerator degree {num:?} differs from denominator degree {den}")]
    DegreeMismatch {
        lag: usize,
        num: Option<usize>,
        den: usize,
    },
    #[error("operation needs a three-term recurrence (k = 2), got k = {0}")]
    NotThreeTerm(usize),
    #[error("path enumeration is limited to M <= 40, got M = {0}")]
    TruncationTooLarge(usize),
    #[error("invalid Heun parameters: {0}")]
    InvalidParams(&'static str),
    #[error("indicial root lambda = {lambda} puts a pole at index {index}")]
    IndicialPole { lambda: String, index: i64 },
    #[error("x lies outside the absolute-convergence domain: sum |alpha_m| |x|^m = {sum} >= 1")]
    OutsideDomain { sum: String },
    #[error("all coefficient limits vanish; the boundary radius is undefined")]
    AllZeroLimits,
    #[error("no proof constants verified within N_check = {0}")]
    NotFoundWithin(u64),
    #[error("need at least {needed} coefficients, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("invalid recurrence: {0}")]
    InvalidRecurrence(&'static str),
    #[error("x^lambda is not representable in the exact tier; use a float precision")]
    NonRationalPower,
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

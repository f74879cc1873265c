use thiserror::Error;

/// Everything that can go wrong in the core computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sieve limit {limit} needs about {estimated_bytes} bytes, over the budget of {budget_bytes} bytes")]
    BudgetExceeded {
        limit: u64,
        estimated_bytes: u64,
        budget_bytes: u64,
    },

    #[error("query {n} is beyond the prime table limit {limit}")]
    OutOfRange { n: u64, limit: u64 },

    #[error("prime table limit {limit} is too small, need at least {required}")]
    TableTooSmall { required: u64, limit: u64 },

    #[error("x = {x} exceeds the brute-force budget {budget}")]
    BruteBudgetExceeded { x: u64, budget: u64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("domain error: {0}")]
    Domain(&'static str),

    #[error("invalid ratio {num}/{den}: need den >= 1 and num >= den")]
    InvalidRatio { num: u64, den: u64 },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("quadrature did not reach the requested tolerance within depth {max_depth}")]
    NoConvergence { max_depth: u32 },

    #[error("closed form violated at z = {z}: sum {sum}, expected {expected}")]
    IdentityViolation { z: u64, sum: u64, expected: u64 },

    #[error("invalid prime table: {0}")]
    InvalidTable(&'static str),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

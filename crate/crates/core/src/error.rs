use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("lcm of an empty list")]
    EmptyLcm,
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("axiom ({axiom}) violated by cluster {cluster}: {msg}")]
    Axiom {
        axiom: &'static str,
        cluster: String,
        msg: String,
    },
    #[error("not of polynomial type: {0}")]
    NotPolynomialType(String),
    #[error("wild inertia: p = {p} divides the inertia order {e}")]
    Wild { p: u64, e: u64 },
    #[error("prime too small: {0}")]
    PrimeTooSmall(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("integrity violation: {0}")]
    Integrity(String),
}

impl Error {
    /// True for internal consistency failures, as opposed to rejected input.
    pub fn is_integrity(&self) -> bool {
        matches!(self, Error::Integrity(_))
    }
}

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("polynomial is not squarefree: {0}")]
    NotSquarefree(String),
    #[error("zero polynomial")]
    ZeroPolynomial,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("empty polynomial expression")]
    Empty,
    #[error("cannot parse term `{0}`")]
    Term(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TargetError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("type {rep} needs p = 1 mod {modulus}, got p = {p}")]
    Congruence {
        rep: &'static str,
        modulus: u64,
        p: u64,
    },
    #[error("prime {0} is too large for word-sized residues")]
    TooLarge(u64),
    #[error("bound does not fit in a 64-bit search coefficient")]
    Overflow,
}

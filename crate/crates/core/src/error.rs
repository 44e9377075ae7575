use thiserror::Error;

/// Everything that can go wrong in the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("series in different variables: {0} vs {1}")]
    VariableMismatch(char, char),
    #[error("leading coefficient is zero or unknown")]
    ZeroLeadingTerm,
    #[error("order of a series with no known terms is undetermined")]
    UnknownOrder,
    #[error("composition is not well defined: {0}")]
    IllFormedComposition(String),
    #[error("root not available in a cyclotomic extension: {0}")]
    RootNotInField(String),
    #[error("not enough known terms: {0}")]
    PrecisionExhausted(String),
    #[error("an exact series would need infinitely many terms; truncate the input first")]
    NeedsTruncation,
    #[error("compositional inverse of a series of order zero")]
    ZeroOrder,
    #[error("compositional inverse of a negative-order series with more than one term expands in descending powers")]
    NegativeOrderInverse,
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("derivative of the polynomial vanishes")]
    ZeroDerivative,
    #[error("degrees {0} and {1} are not coprime")]
    NonCoprimeDegrees(u32, u32),
    #[error("only operators of order at most one are supported here")]
    HigherOrderUnsupported,
    #[error("variable change needs a series of positive order")]
    BadSubstitution,
    #[error("factor is not irreducible")]
    NotIrreducible,
    #[error("entries do not form a twist orbit")]
    NotAnOrbit,
    #[error("slope {0} is not greater than one")]
    SlopeNotGreaterThanOne(String),
    #[error("Jordan blocks of size greater than one are not supported")]
    JordanNotSupported,
    #[error("p = {0} is even; the duality is only asserted for odd p (use force)")]
    EvenP(u32),
    #[error("leading eigenvalues are not distinct")]
    EigenvaluesNotDistinct,
    #[error("leading coefficient matrix not supported: {0}")]
    UnsupportedLeadingMatrix(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

use crate::word::RewriteTrace;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),
    #[error("group S_{0} must have n >= 1")]
    InvalidRank(usize),
    #[error("rank mismatch: S_{0} vs S_{1}")]
    RankMismatch(usize, usize),
    #[error("generator index {index} is out of range for S_{n}")]
    GeneratorOutOfRange { index: usize, n: usize },
    #[error("S_{n} exceeds the brute-force rank bound {bound}")]
    RankBoundExceeded { n: usize, bound: usize },
    #[error("element is not contained in the parabolic subgroup W_I")]
    NotInParabolic,
    #[error("{0:?} is not a Coxeter element of S_n")]
    NotCoxeter(Vec<usize>),
    #[error("{0:?} is not minimal in its class but admits no length-2 descent conjugation")]
    NoLengthDescent(Vec<usize>),
    #[error("no conjugation path found between {0:?} and {1:?}")]
    NoPath(Vec<usize>, Vec<usize>),

    #[error("operation requires a nonempty word")]
    EmptyWord,
    #[error("position {pos} is out of range for a word of length {len}")]
    PositionOutOfRange { pos: usize, len: usize },
    #[error("letters {0} and {1} do not commute")]
    NotCommuting(usize, usize),
    #[error("no braid triple s,t,s with |s-t| = 1 at position {0}")]
    BraidMismatch(usize),
    #[error("first and last letters differ")]
    EndpointsDiffer,
    #[error("reduction budget exhausted after {} steps", .0.steps.len())]
    BudgetExhausted(Box<RewriteTrace>),
    #[error("word has repeated letters")]
    RepeatedLetters,

    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u32),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("no built-in modulus for q = {0}")]
    NoDefaultModulus(u64),
    #[error("{count} cosets exceed the enumeration bound {bound}")]
    CosetBoundExceeded { count: String, bound: usize },
    #[error("generator set {small:?} is not contained in {big:?}")]
    NotSubset { small: Vec<usize>, big: Vec<usize> },
    #[error("matrix dimension mismatch")]
    DimensionMismatch,

    #[error("p = {p} is not the characteristic of F_{q}")]
    CharacteristicMismatch { p: u64, q: u64 },
    #[error("boundary composition starting at degree {0} is nonzero")]
    NotAComplex(usize),
    #[error("value does not fit in 64 bits")]
    Overflow,
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors caused by a configured size limit.
    pub fn is_bound(&self) -> bool {
        matches!(
            self,
            Error::RankBoundExceeded { .. } | Error::CosetBoundExceeded { .. }
        )
    }
}

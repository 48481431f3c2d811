use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid Cartan type {family}{rank}")]
    InvalidCartanType { family: char, rank: usize },

    #[error("letter {letter} is not a simple index of a rank {rank} datum")]
    InvalidLetter { letter: usize, rank: usize },

    #[error("{0} is not a root of the datum")]
    NotARoot(String),

    #[error("word ({0}) is not reduced")]
    NonReducedWord(String),

    #[error("word ({word}) is not a minimal coset representative for target type {{{target}}}")]
    NotMinimalCosetRep { word: String, target: String },

    #[error("word length {len} exceeds the supported maximum {max}")]
    WordTooLong { len: usize, max: usize },

    #[error("point {0} is not a T-fixed point of the Schubert variety")]
    PointNotInVariety(String),

    #[error("gallery {gallery} does not lie over the point {point}")]
    TargetMismatch { gallery: String, point: String },

    #[error("malformed block structure: {0}")]
    MalformedStructure(String),

    #[error("unsupported type: {0}")]
    UnsupportedType(String),

    #[error("cell equations carry unresolved signs")]
    UnresolvedSigns,

    #[error("enumeration of {points} points exceeds the budget of {budget}")]
    BudgetExceeded { points: u128, budget: u128 },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

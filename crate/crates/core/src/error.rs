use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("twist incompatible with the Dynkin diagram: {0}")]
    IncompatibleTwist(String),
    #[error("invalid root datum: {0}")]
    InvalidDatum(String),
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("vector is not integral: {0}")]
    NonIntegral(String),
    #[error("cocharacter is not dominant: {0}")]
    NonDominant(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("Kottwitz points differ: {0}")]
    KappaMismatch(String),
    #[error("vector {0} is not in the rational span of the coroots")]
    NotInCorootSpan(String),
    #[error("classes are not comparable in the dominance order")]
    Incomparable,
    #[error("class is not in B(G, mu): {0}")]
    NotInBGMu(String),
    #[error("positive root expected, got {0:?}")]
    NotPositiveRoot(Vec<i64>),
    #[error("valuation pattern matched {matches} classes, expected exactly one")]
    Unclassified { matches: usize },
    #[error("iteration cap {0} exceeded")]
    IterationCap(usize),
    #[error("truncation level {level} too small: {detail}")]
    TruncationTooCoarse { level: usize, detail: String },
    #[error("truncation level {level} below stratum ceiling {ceiling}")]
    LevelTooSmall { level: i64, ceiling: i64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

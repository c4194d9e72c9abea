//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator index {index} out of range (alphabet has {arity} generators)")]
    InvalidGenerator { index: usize, arity: usize },

    #[error("unknown generator name {0:?}")]
    UnknownGenerator(String),

    #[error("words are over different generator alphabets ({left} vs {right} generators)")]
    GeneratorSetMismatch { left: usize, right: usize },

    #[error("no image supplied for generator {0}")]
    MissingImage(usize),

    #[error("coset enumeration exceeded the row limit of {limit}")]
    LimitExceeded { limit: usize },

    #[error("coset {coset} out of range (table has {rows} cosets)")]
    InvalidCoset { coset: usize, rows: usize },

    #[error("subgroup is not normal; the coset action moves a subgroup generator")]
    NotNormal,

    #[error("group of order {order} exceeds the search bound {bound}")]
    OrderBoundExceeded { order: usize, bound: usize },

    #[error("chosen images do not kill relator {relator:?}")]
    RelatorViolation { relator: String },

    #[error("chain index {index} out of range (chain has {len} members)")]
    ChainIndexOutOfRange { index: usize, len: usize },

    #[error("induced component map is not well defined: {0}")]
    WellDefinednessViolation(String),

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

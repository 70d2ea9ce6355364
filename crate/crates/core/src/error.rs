//! Error type shared by all modules of the crate.

use std::error::Error as StdError;
use std::fmt;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two bit strings were expected to have the same length.
    LengthMismatch { expected: usize, got: usize },
    /// An index (row, column, level, ...) is outside its valid range.
    IndexOutOfRange { what: &'static str, index: usize, max: usize },
    /// A sphere radius is outside `0..=n`.
    RadiusOutOfRange { radius: usize, n: usize },
    /// An enumerative operation was asked for a dimension beyond the
    /// supported limit (the operation would touch all 2^n strings).
    DimensionOverLimit { n: usize, limit: usize },
    /// A probability parameter is outside `[0, 1]`.
    ProbabilityOutOfRange,
    /// A matrix row that must sum to 1 does not.
    NonStochasticRow { row: usize },
    /// A linear system that should be solvable turned out singular.
    SingularSystem(&'static str),
    /// Float-mode Vandermonde solves are refused beyond this many levels.
    ConditioningLimit { q: usize, limit: usize },
    /// The Markov chain cannot reach the absorbing state from this level.
    NotAbsorbing { level: usize },
    /// An enumeration or power budget would be exceeded.
    BudgetExceeded(String),
    /// Two sequences that must have equal length do not.
    SizeMismatch { expected: usize, got: usize },
    /// A requested matrix has fewer moment rows than the level count needs.
    InsufficientRows { have: usize, need: usize },
    /// Fitness levels must be strictly increasing and non-empty.
    InvalidLevels(String),
    /// Least-squares basis is rank deficient on the given points.
    RankDeficient,
    /// An iterative search failed to converge.
    NonConvergence(&'static str),
    /// Malformed textual input (bit strings, DIMACS, value tables).
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::LengthMismatch { expected, got } => {
                write!(f, "bit string length mismatch: expected {expected}, got {got}")
            }
            Error::IndexOutOfRange { what, index, max } => {
                write!(f, "{what} index {index} out of range 0..={max}")
            }
            Error::RadiusOutOfRange { radius, n } => {
                write!(f, "sphere radius {radius} out of range 0..={n}")
            }
            Error::DimensionOverLimit { n, limit } => {
                write!(f, "dimension {n} exceeds the enumerative limit {limit}")
            }
            Error::ProbabilityOutOfRange => write!(f, "probability must lie in [0, 1]"),
            Error::NonStochasticRow { row } => {
                write!(f, "row {row} does not sum to 1")
            }
            Error::SingularSystem(what) => write!(f, "singular linear system in {what}"),
            Error::ConditioningLimit { q, limit } => {
                write!(
                    f,
                    "refusing float-mode Vandermonde solve with {q} levels (limit {limit}); \
                     use exact arithmetic"
                )
            }
            Error::NotAbsorbing { level } => {
                write!(f, "chain not absorbing from level {level}")
            }
            Error::BudgetExceeded(msg) => write!(f, "budget exceeded: {msg}"),
            Error::SizeMismatch { expected, got } => {
                write!(f, "sequence length mismatch: expected {expected}, got {got}")
            }
            Error::InsufficientRows { have, need } => {
                write!(f, "matrix has {have} moment rows but {need} are required")
            }
            Error::InvalidLevels(msg) => write!(f, "invalid fitness levels: {msg}"),
            Error::RankDeficient => write!(f, "least-squares basis is rank deficient"),
            Error::NonConvergence(what) => write!(f, "{what} failed to converge"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl StdError for Error {}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

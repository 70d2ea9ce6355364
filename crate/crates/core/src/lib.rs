//! Exact analysis of uniform bit-flip mutation on pseudo-Boolean
//! landscapes.
//!
//! The crate computes, in closed form or exactly by enumeration:
//!
//! - Walsh expansions and elementary components of functions on the
//!   binary hypercube ([`walsh`], [`bitspace`]);
//! - exact integer Krawtchouk matrices, the spectra of the sphere
//!   operators ([`krawtchouk`]);
//! - the full probability distribution of fitness values after one
//!   bit-flip mutation, through the moment factorization
//!   `mu = F(x) * Lambda(p)` and a Vandermonde solve ([`mutation`]);
//! - closed-form `F` matrices and fitness-level transition matrices for
//!   the Onemax family ([`onemax`]) and for MAX-SAT ([`maxsat`]);
//! - exact expected first-hitting times of a (1+lambda) EA on Onemax,
//!   optimal mutation rates, and least-squares fits of the resulting
//!   runtime curves ([`runtime`]);
//! - brute-force and Monte-Carlo reference implementations used only for
//!   verification ([`oracle`]).
//!
//! All numeric code is generic over [`Scalar`]: `f64` for speed,
//! [`num_rational::BigRational`] for exact results.

pub mod bitspace;
pub mod error;
pub mod krawtchouk;
pub mod maxsat;
pub mod mutation;
pub mod onemax;
pub mod oracle;
pub mod runtime;
pub mod scalar;
pub mod walsh;

pub use bitspace::{BitString, Sphere, ENUM_LIMIT};
pub use error::{Error, Result};
pub use krawtchouk::{binomial, KrawtchoukCache, KrawtchoukMatrix};
pub use maxsat::{Clause, ClauseFn, ClauseSet, SubsetBudget, UpsilonMatrix};
pub use mutation::{FMatrix, FSource, FitnessLevels, LambdaVector, ProbabilityVector};
pub use onemax::{MonotoneDirection, VarpiMatrix, XiMatrix};
pub use runtime::{AbsorptionResult, BasisFn, OptimalP, TransitionMatrix};
pub use scalar::Scalar;
pub use walsh::{FunctionTable, WalshExpansion};

/// Re-exported so downstream code can name the exact scalar without an
/// explicit num dependency.
pub use num_bigint::BigInt;
pub use num_rational::BigRational;

//! Exact enumeration and asymptotic analysis of linear chord diagrams with
//! one marked chord.
//!
//! A configuration is a perfect matching of `2n` points on a line together
//! with one distinguished chord. Every other chord sits in exactly one of
//! four positions relative to the marked chord (see [`StatKind`]), and the
//! crate counts configurations by how many chords occupy each position.
//!
//! The counts are produced by several independent routes:
//!
//! - [`exact`]: closed-form finite sums over big integers, the crossing
//!   recursion and the size distribution of the marked chord;
//! - [`series`]: truncated bivariate exponential generating functions with
//!   exact rational coefficients;
//! - [`oracle`]: brute-force enumeration of every marked diagram, plus a
//!   uniform sampler for Monte Carlo checks;
//! - [`analysis`]: exact distributions and factorial moments, limiting
//!   densities and their CDFs, and numerical quadrature for the Normal
//!   approximation.

pub mod analysis;
mod error;
pub mod exact;
pub mod numbers;
pub mod oracle;
pub mod series;
mod stat;

pub use error::{Error, Result};
pub use stat::StatKind;

/// Arbitrary-precision integer used for every exact count.
pub type ExactInt = num_bigint::BigInt;

/// Arbitrary-precision rational used for exact probabilities and moments.
pub type ExactRational = num_rational::BigRational;

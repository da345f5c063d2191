//! Exact-arithmetic toolkit for fermionic formulas of affine Lie algebras.
//!
//! The crate covers the full affine list `X^(r)_N`: Cartan/Kac data
//! ([`affine_cartan`]), exact Laurent series in `q` ([`qseries`]), fermionic
//! forms and their string-function limits ([`fermionic`]), classical
//! characters and Q-systems ([`classical_characters`]), finite affine crystals
//! with combinatorial R-matrices and one-dimensional sums ([`crystal`]) and the
//! numeric dilogarithm sum rule ([`dilog`]). The [`suite`] module collects the
//! verification checks driven by the command-line front end.


// Index loops mirror the matrix and weight formulas they implement.
#![allow(clippy::needless_range_loop, clippy::type_complexity)]
pub mod affine_cartan;
pub mod classical_characters;
pub mod crystal;
pub mod dilog;
pub mod error;
pub mod fermionic;
pub mod qseries;
pub mod suite;

pub use error::{Error, Result};

/// Exact rational number used for weights, pairings and `q`-exponents.
pub type Q = num_rational::Ratio<i64>;

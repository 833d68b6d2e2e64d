//! Tsallis q-exponential calculus.
//!
//! Coefficient sequences and reproducing kernels of the q-Fock-Tsallis
//! spaces, their (possibly indefinite) inner products, the shift and
//! multiplication operator algebra with adjoints and commutators, q-Stirling
//! numbers, Jordan-chain solvers, and q-rational matrix-valued functions via
//! the q-Tsallis Borel transform.
//!
//! Everything is generic over a real field ([`scalar::Real`]): `f64` for
//! floating point work and [`scalar::Rational`] for exact identities.

pub mod error;
pub mod format;
pub mod qcore;
pub mod rational;
pub mod scalar;
pub mod series;
pub mod jordan;
pub mod operators;
pub mod space;

pub use error::{Error, Result};
pub use qcore::QParam;
pub use scalar::{Rational, Real};
pub use series::{MatrixSeries, TruncatedSeries};

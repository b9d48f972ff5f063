//! Exact computations with C-type and C⁺-type operators on `l^p(N)`.
//!
//! The crate builds block-structured operators from dyadic parameters,
//! applies them and their inverses exactly on finitely supported vectors, and
//! checks the finite identities and inequalities that govern their orbits:
//! periodicity, inverse formulas, the periodic-point certificate construction
//! for the inverse, and the counting bounds used to rule out upper frequent
//! hypercyclicity of the forward operator.
//!
//! Modules:
//! - [`scalar`]: dyadic rationals, sparse vectors and norms.
//! - [`operator`]: the C-type operator, its inverse, powers and a dense oracle.
//! - [`schedule`]: C⁺ parameter schedules, weight profiles and validation.
//! - [`analysis`]: projections, orbit statistics and the certificate checkers.
//! - [`cli`]: the `ctype` command-line front end.

#![allow(clippy::needless_range_loop)]

pub mod analysis;
pub mod cli;
pub mod operator;
pub mod report;
pub mod scalar;
pub mod schedule;

pub use operator::CTypeOperator;
pub use scalar::{Dyadic, NormExponent, SparseVec};
pub use schedule::CPlusSchedule;

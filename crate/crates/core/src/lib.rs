//! Computational engine for Schreier families, repeated averages, gauge
//! functions, and the Banach-space norms built from them, together with
//! empirical scanners (quasi-greediness, democracy, unconditionality) and a
//! suite runner that binds each quantitative statement to an executable
//! instance check.
//!
//! Everything combinatorial is exact: sets and partition indices are
//! arbitrary-precision integers, averages and block masses are exact
//! rationals, and coefficient values live in the field of quartic surds
//! `r * q^(1/4)`. Real analysis (logarithms, roots, gauge values) is done in
//! certified dyadic interval arithmetic at a configurable precision, and an
//! inequality is only reported as verified when it holds across the rounding
//! envelope.

pub mod averages;
pub mod budget;
pub mod config;
pub mod error;
pub mod gauge;
pub mod greedy;
pub mod ordinal;
pub mod real;
pub mod scalar;
pub mod schreier;
pub mod sets;
pub mod spaces;
pub mod vector;
pub mod verify;

pub use budget::Budget;
pub use error::{Error, Result};
pub use ordinal::{Class, Ordinal};
pub use real::{Check, Real, RealCtx};
pub use scalar::Scalar;
pub use sets::{FiniteSet, IntSpan};
pub use vector::BlockVector;

//! Numerical laboratory for multiple zeta values and their interpolated
//! and interpolated-and-shifted variants.
//!
//! The crate evaluates these sums to arbitrary precision with rigorous
//! error bounds and ships a verification harness that checks a family of
//! identities relating them, including two generating-function identities
//! built from gamma-function ratios.

pub mod cli;
pub mod engine;
pub mod error;
pub mod harness;
pub mod indices;
pub mod numerics;
pub mod posets;
pub mod values;

pub use error::{Error, Result};

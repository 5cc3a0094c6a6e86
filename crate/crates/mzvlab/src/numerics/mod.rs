//! Arbitrary-precision arithmetic with tracked error bounds, plus the
//! special functions the rest of the crate needs.

mod bernoulli;
mod fmt;
mod gamma;
mod mag;
mod real;

pub use bernoulli::bernoulli;
pub use fmt::format_exact;
pub use gamma::{binomial, digamma, gamma};
pub use mag::Mag;
pub use real::{mag_to_bigfloat, value_le, BigReal};

pub(crate) use real::mag_from_serialized;

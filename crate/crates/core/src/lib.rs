//! Extremal problems, minimal interpolation and canonical divisors in the
//! Bergman spaces `A^p` of the unit disc.
//!
//! Closed-form solutions are built symbolically ([`funcrep`], [`series`],
//! [`projection`], [`extremal`], [`divisor`]) and checked against an
//! independent numeric path ([`quadrature`], [`oracle`]).

pub mod cli;
pub mod divisor;
pub mod error;
pub mod extremal;
pub mod funcrep;
pub mod json;
pub mod linalg;
pub mod oracle;
pub mod projection;
pub mod quadrature;
pub mod render;
pub mod series;

pub use num_complex::Complex64 as C64;

pub use error::{Error, Result};

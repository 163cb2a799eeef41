//! Power-series solutions of (k+1)-term recurrences with rational-function
//! coefficients, specialised to the local Heun function, together with the
//! machinery for studying their behaviour on the boundary of the domain of
//! absolute convergence.
//!
//! The crate is `no_std` and only needs an allocator. Numbers come in two
//! tiers (see [`scalar`]): exact rationals and arbitrary-precision floats.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod convergence;
pub mod error;
pub mod heun;
pub mod poly;
pub mod recurrence;
pub mod scalar;
pub mod special;

pub use error::{Error, Result};
pub use scalar::{Complex, Float, Precision, Rational, RealScalar, Scalar};

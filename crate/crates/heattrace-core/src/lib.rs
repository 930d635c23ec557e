//! Large-time asymptotics of the heat-kernel G-trace on a symmetric space G/K,
//! computed from restricted root data alone.
//!
//! The crate is `no_std` with `alloc`. File formats, the command line and
//! thread-parallel runners live in the `heattrace` companion crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod catalog;
pub mod chambers;
pub mod constants;
pub mod error;
pub mod heattrace;
pub mod linalg;
pub mod novikov;
pub mod quadrature;
pub mod rootdata;

pub use error::{Error, Result};
pub use rootdata::Vec0;

/// Absolute tolerance for every "this pairing vanishes" decision.
pub const TAU_ZERO: f64 = 1e-9;

/// Default cap on the order of generated Weyl groups.
pub const GROUP_CAP: usize = 100_000;

/// Largest supported time; `e^{t|v|^2/2}` leaves the double range past it.
pub const T_MAX: f64 = 500.0;

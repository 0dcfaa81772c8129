//! Qudit operator algebra for generalized GHZ nonlocality.
//!
//! Everything here is `no_std` (with `alloc`): exact root-of-unity phases,
//! dense complex linear algebra, the X/Y/Z/QFT observables and their
//! concurrent composite sets, generalized GHZ states with exact measurement
//! statistics, modular local-hidden-variable constraint systems, and
//! eigenbasis-overlap / commutant checks for genuine d-dimensionality.
//!
//! IO, reports and the command-line front end live in the `ghzlab` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod dimensionality;
pub mod error;
pub mod ghz_model;
pub mod lhv;
pub mod linalg;
pub mod observables;
pub mod phase;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Largest local dimension accepted anywhere in the crate.
pub const MAX_DIM: usize = 64;
/// Largest party count accepted anywhere in the crate.
pub const MAX_PARTIES: usize = 63;

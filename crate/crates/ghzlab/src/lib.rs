//! Verification pipelines, reports and command-line support for generalized
//! GHZ nonlocality, built on the `no_std` [`ghzlab_core`] crate.

pub mod error;
pub mod limits;
pub mod pipeline;
pub mod report;
pub mod search;

pub use error::AppError;
pub use limits::Limits;

pub const TOOL_VERSION: &str = concat!("ghzlab ", env!("CARGO_PKG_VERSION"));

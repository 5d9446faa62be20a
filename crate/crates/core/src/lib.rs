//! Neumann eigenfunctions on rectangles: exact spectra, the number theory of
//! their degeneracies, and certificates showing that every non-constant
//! eigenfunction takes a non-positive value somewhere on the boundary.

pub mod cli;
pub mod eigenfunction;
pub mod error;
pub mod exact;
pub mod oracle;
pub mod spectrum;
pub mod trig;
pub mod twosquares;
pub mod witness;

pub use error::{Error, Result};

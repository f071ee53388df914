//! Measurement-based quantum computation restricted to (X,Y)-plane
//! measurements on rectangular cluster states.

pub mod cli;
pub mod cluster;
pub mod compiler;
pub mod error;
pub mod matrix;
pub mod pattern;
pub mod statevec;
pub mod verify;

pub use error::{Error, Result};

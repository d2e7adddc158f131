//! Spectral solver for structured matrix polynomial equations.

pub mod cli;
pub mod error;
pub mod instances;
pub mod numeric;
pub mod polymatrix;
pub mod solver;

pub use error::{Error, Result};

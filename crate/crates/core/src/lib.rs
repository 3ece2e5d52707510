//! Sorkin–Johnston states on ultrastatic slabs, mode by mode.
//!
//! The spatial Laplacian splits the field into independent temporal modes;
//! everything here works one frequency ω_j at a time and then sums over the
//! spectrum to test Hadamard regularity and disjointness.

pub mod cli;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod export;
pub mod modes;
pub mod oracle;
pub mod quadrature;
pub mod smearing;
pub mod spectrum;
pub mod summation;
pub mod two_point;

pub use error::{Error, Result};

//! Chain mapping of harmonic baths and matrix-product-state dynamics.

pub mod chain;
pub mod cli;
pub mod error;
pub mod format;
pub mod mps;
pub mod ops;
pub mod oracle;
pub mod orthopoly;
pub mod quadrature;
pub mod specdens;
pub mod tridiag;

pub use error::{Error, Result};

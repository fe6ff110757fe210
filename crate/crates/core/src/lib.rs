//! Reduction types of Ciani plane quartics over p-adic fields of odd residue
//! characteristic.

pub mod classifier;
pub mod error;
pub mod graphs;
pub mod hyperelliptic;
pub mod oracle;
pub mod quartic;
pub mod valuation;

pub use error::{Error, Result};

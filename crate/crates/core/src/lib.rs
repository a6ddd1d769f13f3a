//! Schatten p-norms, certified p-numerical radii, generalized Aluthge
//! transforms and a randomized harness that checks a catalogue of matrix
//! inequalities built from them.

pub mod campaign;
pub mod ensembles;
pub mod inequalities;
pub mod error;
pub mod io;
pub mod linalg;
pub mod schatten;
pub mod transforms;
#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};

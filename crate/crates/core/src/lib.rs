//! Preparation of orthogonal decoherence-free subspace basis states by
//! postselected projection, with statevector simulation and transpilation to
//! an `{RX, RZ, iSWAP}` gate set.

pub mod basis;
pub mod circuit;
pub mod error;
pub mod gates;
pub mod hw;
pub mod orthogonalizer;
pub mod report;
pub mod statevector;

pub use error::{Error, Result};

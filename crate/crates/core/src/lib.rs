//! Excited-state energies from unitarily rotated determinant subspaces, with
//! adaptive ground-state ansätze, shot sampling, measurement grouping and
//! readout mitigation on a dense statevector backend.

pub mod ansatz;
pub mod chem;
pub mod eom;
pub mod error;
pub mod linalg;
pub mod measurement;
pub mod mitigation;
pub mod operators;
mod par;
pub mod seed;
pub mod simulator;

pub use error::{Error, Result};
pub use seed::derive_seed;

//! Molecular integrals, FCIDUMP I/O, active spaces and the exact reference solver.

pub mod active;
pub mod fci;
pub mod fcidump;
pub mod integrals;

pub use active::{restrict_active, ActiveSpace};
pub use fci::{fci_solve, parse_spectrum_csv, spectrum_csv, SpectrumReference};
pub use fcidump::{parse_fcidump, write_fcidump};
pub use integrals::MolecularIntegrals;

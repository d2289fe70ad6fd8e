//! Excited states from the Hamiltonian projected onto rotated singly and
//! doubly excited determinants.

pub mod basis;
pub mod davidson;
pub mod matrix;
pub mod sampled;
pub mod scaling;

pub use basis::{build_basis_state, EomBasis};
pub use davidson::{davidson_solve, DavidsonOptions, DavidsonResult};
pub use matrix::{
    brute_force_ledger, build_m_exact, diagonalize, matrix_from_oracle, CostLedger, EomMatrix,
    EomOracle, EomSolution,
};
pub use sampled::{
    build_m_adaptive, build_m_sampled, eom_settings, state_settings, AdaptiveOptions,
    MeasurementScheme, SampledBuild, SamplingConfig, Shots,
};
pub use scaling::{scaling_report, ScalingMode, ScalingReport, ScalingRow};

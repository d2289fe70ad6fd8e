//! Measurement compression and shot planning.

pub mod brg;
pub mod grouping;
pub mod shots;

pub use brg::{
    brg_estimate_energy, brg_factorize, brg_group_count, BrgEstimate, BrgFactorization, BrgRank,
};
pub use grouping::{group_pauli_terms, Grouping, MeasurementGroup};
pub use shots::{
    allocate_shots_adaptive, allocate_shots_uniform, budget_accounting, pilot_plan, variance_proxy,
    Phase, SettingId, ShotPlan,
};

//! Ground-state circuits, their optimization, and operator selection.

pub mod adapt;
pub mod circuit;
pub mod optimize;

pub use adapt::{
    adapt_vqe, default_method_for, hea_ansatz, lucj_ansatz, operator_gradient, optimize_circuit,
    optimize_with_restarts, perturb_parameters, pool_gradients, uccsd_ansatz, AdaptConfig,
    AdaptResult, AdaptStatus, EnergyObjective, LucjConfig, LucjParameters,
};
pub use circuit::{AnsatzCircuit, AnsatzKind, CircuitProgram, Element, GateCounts};
pub use optimize::{optimize, Method, Objective, OptimizeOptions, OptimizeResult, Status};

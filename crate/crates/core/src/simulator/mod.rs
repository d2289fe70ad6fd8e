//! Dense statevector backend.

pub mod exp;
pub mod noise;
pub mod orbital;
pub mod sampling;
pub mod sparse;
pub mod statevector;

pub use exp::{apply_anti_hermitian, apply_excitation, apply_exp_pauli, rotate_pauli};
pub use noise::{
    apply_depolarizing, apply_pauli, sample_noisy, GateSite, NoiseModel, NoisyProgram,
};
pub use orbital::{apply_orbital_rotation, givens_decompose, Givens, GivensDecomposition};
pub use sampling::{
    apply_readout_noise, bitstring, estimate_from_counts, estimate_from_quasi, exact_distribution,
    rotate_to_basis, sample_counts, BasisPattern, CountsHistogram, QuasiDistribution, Sampler,
};
pub use sparse::SparseOperator;
pub use statevector::{expectation, hartree_fock_bits, hartree_fock_state, Statevector};

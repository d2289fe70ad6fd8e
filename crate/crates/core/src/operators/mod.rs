//! Pauli algebra, fermion-to-qubit mapping and excitation pools.

pub mod fermion;
pub mod hamiltonian;
pub mod pauli;
pub mod pool;

pub use fermion::{anti_hermitian_image, jordan_wigner, spin_orbital, FermionGenerator, Ladder};
pub use hamiltonian::{build_hamiltonian, number_operator, sz_operator};
pub use pauli::{Axis, PauliString, PauliSum};
pub use pool::build_excitation_pool;

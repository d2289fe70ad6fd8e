//! Excitation manifold and the rotated determinant states it spans.

use num_complex::Complex64;

use crate::ansatz::AnsatzCircuit;
use crate::error::{Error, Result};
use crate::mitigation::SymmetrySector;
use crate::operators::{build_excitation_pool, FermionGenerator};
use crate::simulator::{hartree_fock_bits, Statevector};

/// `[identity, singles…, doubles…]`; entry `J` labels `|Φ_J⟩ = Ĝ_J|HF⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct EomBasis {
    pub n_qubits: usize,
    pub n_electrons: usize,
    pub entries: Vec<Option<FermionGenerator>>,
    determinants: Vec<(f64, u64)>,
}

impl EomBasis {
    /// Identity followed by `generators`, each of which must act on `|HF⟩`.
    pub fn new(
        n_qubits: usize,
        n_electrons: usize,
        generators: Vec<FermionGenerator>,
    ) -> Result<Self> {
        if n_electrons > n_qubits {
            return Err(Error::IndexOutOfRange {
                index: n_electrons,
                limit: n_qubits,
            });
        }
        let hf = hartree_fock_bits(n_electrons);
        let mut determinants = vec![(1.0, hf)];
        for g in &generators {
            if g.max_mode() >= n_qubits {
                return Err(Error::IndexOutOfRange {
                    index: g.max_mode(),
                    limit: n_qubits,
                });
            }
            determinants.push(
                g.apply(hf)
                    .ok_or_else(|| Error::InvalidExcitation(g.to_string()))?,
            );
        }
        let entries = std::iter::once(None)
            .chain(generators.into_iter().map(Some))
            .collect();
        Ok(Self {
            n_qubits,
            n_electrons,
            entries,
            determinants,
        })
    }

    /// Every Sz-conserving single and double out of the Hartree–Fock filling.
    pub fn singles_doubles(n_qubits: usize, n_electrons: usize) -> Result<Self> {
        let pool = build_excitation_pool(n_electrons, n_qubits.saturating_sub(n_electrons));
        Self::new(n_qubits, n_electrons, pool)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sign and bitstring of `Ĝ_J|HF⟩`.
    pub fn determinant(&self, j: usize) -> (f64, u64) {
        self.determinants[j]
    }

    pub fn label(&self, j: usize) -> String {
        self.entries[j]
            .as_ref()
            .map_or_else(|| "ref".to_string(), |g| g.to_string())
    }

    pub fn sector(&self) -> SymmetrySector {
        let hf = hartree_fock_bits(self.n_electrons);
        let alpha = (hf & 0x5555_5555_5555_5555).count_ones() as usize;
        SymmetrySector::new(alpha, self.n_electrons - alpha)
    }

    /// `Σ_k c_k |Φ_{J_k}⟩` before the ansatz acts.
    pub fn superposition(&self, terms: &[(usize, Complex64)]) -> Statevector {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << self.n_qubits];
        for &(j, c) in terms {
            let (sign, b) = self.determinant(j);
            amps[b as usize] += c * sign;
        }
        Statevector::from_amplitudes(self.n_qubits, amps).expect("register size matches")
    }
}

/// `U(θ)|Φ_J⟩`.
pub fn build_basis_state(
    ansatz: &AnsatzCircuit,
    basis: &EomBasis,
    j: usize,
) -> Result<Statevector> {
    if ansatz.n_qubits != basis.n_qubits {
        return Err(Error::QubitMismatch {
            expected: basis.n_qubits,
            found: ansatz.n_qubits,
        });
    }
    if j >= basis.len() {
        return Err(Error::IndexOutOfRange {
            index: j,
            limit: basis.len(),
        });
    }
    let init = basis.superposition(&[(j, Complex64::new(1.0, 0.0))]);
    Ok(ansatz.state_from(&init, &ansatz.params))
}

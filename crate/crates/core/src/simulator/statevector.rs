use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operators::PauliSum;

/// Dense state over `n_qubits`; bit `q` of an amplitude index is qubit `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    pub fn basis(n_qubits: usize, index: u64) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[index as usize] = Complex64::new(1.0, 0.0);
        Self { n_qubits, amps }
    }

    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0)
    }

    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1 << n_qubits {
            return Err(Error::QubitMismatch {
                expected: n_qubits,
                found: amps.len().trailing_zeros() as usize,
            });
        }
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            for a in &mut self.amps {
                *a /= n;
            }
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Statevector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn fidelity(&self, other: &Statevector) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Linear combination `Σ c_k |ψ_k⟩` (not normalised).
    pub fn combine(parts: &[(Complex64, &Statevector)]) -> Self {
        let n = parts[0].1.n_qubits;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        for (c, s) in parts {
            for (dst, src) in amps.iter_mut().zip(&s.amps) {
                *dst += c * src;
            }
        }
        Self { n_qubits: n, amps }
    }
}

/// Computational basis state with the lowest `n_electrons` spin orbitals filled.
pub fn hartree_fock_state(n_qubits: usize, n_electrons: usize) -> Statevector {
    Statevector::basis(n_qubits, hartree_fock_bits(n_electrons))
}

pub fn hartree_fock_bits(n_electrons: usize) -> u64 {
    if n_electrons == 0 {
        0
    } else {
        u64::MAX >> (64 - n_electrons)
    }
}

/// Exact `⟨ψ|O|ψ⟩` for a Hermitian Pauli sum.
pub fn expectation(state: &Statevector, observable: &PauliSum) -> Result<f64> {
    if observable.n_qubits() != state.n_qubits() {
        return Err(Error::QubitMismatch {
            expected: state.n_qubits(),
            found: observable.n_qubits(),
        });
    }
    if !observable.is_hermitian(1e-10) {
        return Err(Error::NotHermitian);
    }
    let psi = state.amplitudes();
    let mut total = 0.0;
    for (p, c) in observable.terms() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (b, amp) in psi.iter().enumerate() {
            let (phase, b2) = p.apply_to_basis(b as u64);
            acc += psi[b2 as usize].conj() * phase * amp;
        }
        total += (c * acc).re;
    }
    Ok(total)
}

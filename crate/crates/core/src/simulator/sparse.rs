//! Compressed-row form of a Pauli sum for repeated application.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::Statevector;
use crate::error::{Error, Result};
use crate::operators::PauliSum;
use crate::par;

#[derive(Debug, Clone)]
pub struct SparseOperator {
    n_qubits: usize,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<Complex64>,
}

impl SparseOperator {
    pub fn from_pauli_sum(op: &PauliSum) -> Self {
        let n = op.n_qubits();
        let dim = 1usize << n;
        // Strings sharing an X mask map row r to the same column r ^ x.
        let mut groups: BTreeMap<u64, Vec<(u64, Complex64)>> = BTreeMap::new();
        for (p, c) in op.terms() {
            let (phase, _) = p.apply_to_basis(0);
            groups.entry(p.x).or_default().push((p.z, c * phase));
        }
        let groups: Vec<(u64, Vec<(u64, Complex64)>)> = groups.into_iter().collect();
        let rows: Vec<Vec<(u32, Complex64)>> = par::map_range(dim, |r| {
            let mut row = Vec::new();
            for (x, zs) in &groups {
                let col = (r as u64) ^ x;
                let mut v = Complex64::new(0.0, 0.0);
                for (z, c) in zs {
                    if (z & col).count_ones().is_multiple_of(2) {
                        v += c;
                    } else {
                        v -= c;
                    }
                }
                if v.norm_sqr() > 1e-28 {
                    row.push((col as u32, v));
                }
            }
            row.sort_by_key(|e| e.0);
            row
        });
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let nnz: usize = rows.iter().map(|r| r.len()).sum();
        let mut cols = Vec::with_capacity(nnz);
        let mut vals = Vec::with_capacity(nnz);
        row_ptr.push(0);
        for row in rows {
            for (c, v) in row {
                cols.push(c);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        Self {
            n_qubits: n,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn apply(&self, psi: &[Complex64]) -> Vec<Complex64> {
        par::map_range(psi.len(), |r| {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[k] * psi[self.cols[k] as usize];
            }
            acc
        })
    }

    pub fn apply_state(&self, state: &Statevector) -> Result<Statevector> {
        self.check(state)?;
        Statevector::from_amplitudes(self.n_qubits, self.apply(state.amplitudes()))
    }

    /// Real part of `⟨ψ|O|ψ⟩`.
    pub fn expectation(&self, state: &Statevector) -> Result<f64> {
        self.check(state)?;
        let psi = state.amplitudes();
        let hpsi = self.apply(psi);
        Ok(psi.iter().zip(&hpsi).map(|(a, b)| (a.conj() * b).re).sum())
    }

    /// `⟨bra|O|ket⟩`.
    pub fn matrix_element(&self, bra: &Statevector, ket: &Statevector) -> Result<Complex64> {
        self.check(ket)?;
        let hk = self.apply(ket.amplitudes());
        Ok(bra
            .amplitudes()
            .iter()
            .zip(&hk)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    fn check(&self, state: &Statevector) -> Result<()> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::QubitMismatch {
                expected: self.n_qubits,
                found: state.n_qubits(),
            });
        }
        Ok(())
    }
}

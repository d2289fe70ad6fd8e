//! The subspace matrix `M_IJ = ⟨Φ_I|U†ĤU|Φ_J⟩ − δ_IJ·shift`, its exact
//! construction and dense diagonalization.

use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::basis::{build_basis_state, EomBasis};
use crate::ansatz::AnsatzCircuit;
use crate::error::Result;
use crate::linalg::sym_eigh;
use crate::par;
use crate::simulator::{SparseOperator, Statevector};

/// Running cost totals; every field only grows.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CostLedger {
    pub elements_evaluated: u64,
    pub circuits_executed: u64,
    pub shots_consumed: u64,
}

impl CostLedger {
    /// One matrix element measured with `groups` circuits per prepared state:
    /// one state on the diagonal, two superpositions off it.
    pub fn record_element(&mut self, diagonal: bool, groups: u64) {
        self.elements_evaluated += 1;
        self.circuits_executed += if diagonal { groups } else { 2 * groups };
    }

    pub fn merge(&mut self, other: &CostLedger) {
        self.elements_evaluated += other.elements_evaluated;
        self.circuits_executed += other.circuits_executed;
        self.shots_consumed += other.shots_consumed;
    }

    pub fn to_csv(&self) -> String {
        format!(
            "elements_evaluated,circuits_executed,shots_consumed\n{},{},{}\n",
            self.elements_evaluated, self.circuits_executed, self.shots_consumed
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EomMatrix {
    pub values: DMatrix<f64>,
    /// Measured imaginary parts; unused after finalization for real Hamiltonians.
    pub imag: DMatrix<f64>,
    pub shots: DMatrix<u64>,
    pub stderr: DMatrix<f64>,
    pub evaluated: DMatrix<bool>,
    pub shift: f64,
    finalized: bool,
}

impl EomMatrix {
    pub fn zeros(n: usize, shift: f64) -> Self {
        Self {
            values: DMatrix::zeros(n, n),
            imag: DMatrix::zeros(n, n),
            shots: DMatrix::zeros(n, n),
            stderr: DMatrix::zeros(n, n),
            evaluated: DMatrix::from_element(n, n, false),
            shift,
            finalized: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.values.nrows()
    }

    /// Stores an element and its transpose partner.
    pub fn set(&mut self, i: usize, j: usize, value: f64, imag: f64, shots: u64, stderr: f64) {
        for (a, b, im) in [(i, j, imag), (j, i, -imag)] {
            self.values[(a, b)] = value;
            self.imag[(a, b)] = im;
            self.shots[(a, b)] = shots;
            self.stderr[(a, b)] = stderr;
            self.evaluated[(a, b)] = true;
        }
        self.finalized = false;
    }

    /// `M ← (M + Mᵀ)/2`; a second call changes nothing.
    pub fn finalize(&mut self) {
        let sym = (&self.values + self.values.transpose()) * 0.5;
        self.values = sym;
        self.finalized = true;
    }

    pub fn is_finalized(&self) -> bool {
        self.finalized
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("I,J,value,shots,stderr\n");
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                if self.evaluated[(i, j)] {
                    s.push_str(&format!(
                        "{i},{j},{:.12},{},{:.6e}\n",
                        self.values[(i, j)],
                        self.shots[(i, j)],
                        self.stderr[(i, j)]
                    ));
                }
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EomSolution {
    pub total_energies: Vec<f64>,
    pub excitation_energies: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl EomSolution {
    pub fn from_eigenpairs(values: &[f64], vectors: DMatrix<f64>, shift: f64) -> Self {
        let total_energies: Vec<f64> = values.iter().map(|v| v + shift).collect();
        let e0 = total_energies.first().copied().unwrap_or(0.0);
        let excitation_energies = total_energies.iter().map(|e| e - e0).collect();
        Self {
            total_energies,
            excitation_energies,
            eigenvectors: vectors,
        }
    }

    pub fn n_roots(&self) -> usize {
        self.total_energies.len()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("root,total_energy,excitation_energy\n");
        for (k, (e, x)) in self
            .total_energies
            .iter()
            .zip(&self.excitation_energies)
            .enumerate()
        {
            s.push_str(&format!("{k},{e:.12},{x:.12}\n"));
        }
        s
    }
}

/// Dense symmetric eigendecomposition of the Hermitized matrix.
pub fn diagonalize(m: &EomMatrix) -> EomSolution {
    let sym = if m.is_finalized() {
        m.values.clone()
    } else {
        (&m.values + m.values.transpose()) * 0.5
    };
    let (vals, vecs) = sym_eigh(&sym);
    EomSolution::from_eigenpairs(&vals, vecs, m.shift)
}

/// Exact matrix elements from the rotated basis states, with `Ĥ|ψ_J⟩`
/// computed on first use of column `J`.
pub struct EomOracle<'a> {
    h: &'a SparseOperator,
    states: Vec<Statevector>,
    h_states: Vec<OnceLock<Vec<Complex64>>>,
    pub shift: f64,
}

impl<'a> EomOracle<'a> {
    pub fn new(
        ansatz: &AnsatzCircuit,
        h: &'a SparseOperator,
        basis: &EomBasis,
        shift: f64,
    ) -> Result<Self> {
        let states = par::map_range(basis.len(), |j| build_basis_state(ansatz, basis, j))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        if let Some(s) = states.first() {
            if s.n_qubits() != h.n_qubits() {
                return Err(crate::Error::QubitMismatch {
                    expected: s.n_qubits(),
                    found: h.n_qubits(),
                });
            }
        }
        let h_states = (0..states.len()).map(|_| OnceLock::new()).collect();
        Ok(Self {
            h,
            states,
            h_states,
            shift,
        })
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, j: usize) -> &Statevector {
        &self.states[j]
    }

    fn h_state(&self, j: usize) -> &[Complex64] {
        self.h_states[j].get_or_init(|| self.h.apply(self.states[j].amplitudes()))
    }

    /// Complex `⟨ψ_I|Ĥ|ψ_J⟩` without the shift.
    pub fn raw_element(&self, i: usize, j: usize) -> Complex64 {
        let hj = self.h_state(j);
        self.states[i]
            .amplitudes()
            .iter()
            .zip(hj)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn element(&self, i: usize, j: usize) -> f64 {
        let v = self.raw_element(i, j).re;
        if i == j {
            v - self.shift
        } else {
            v
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        par::map_range(self.dim(), |j| self.element(j, j))
    }
}

/// Every element of `M` with exact expectations. Both triangles are computed
/// independently so their agreement can be inspected before finalizing.
pub fn build_m_exact(
    ansatz: &AnsatzCircuit,
    h: &SparseOperator,
    basis: &EomBasis,
    shift: f64,
) -> Result<EomMatrix> {
    let oracle = EomOracle::new(ansatz, h, basis, shift)?;
    Ok(matrix_from_oracle(&oracle))
}

pub fn matrix_from_oracle(oracle: &EomOracle) -> EomMatrix {
    let n = oracle.dim();
    let cols: Vec<Vec<(f64, f64)>> = par::map_range(n, |j| {
        (0..n)
            .map(|i| {
                let z = oracle.raw_element(i, j);
                (if i == j { z.re - oracle.shift } else { z.re }, z.im)
            })
            .collect()
    });
    let mut m = EomMatrix::zeros(n, oracle.shift);
    for (j, col) in cols.iter().enumerate() {
        for (i, &(re, im)) in col.iter().enumerate() {
            m.values[(i, j)] = re;
            m.imag[(i, j)] = im;
            m.evaluated[(i, j)] = true;
        }
    }
    m
}

/// Ledger of a brute-force build that measures every distinct element.
pub fn brute_force_ledger(n_basis: usize, groups: u64) -> CostLedger {
    let mut l = CostLedger::default();
    for i in 0..n_basis {
        for j in i..n_basis {
            l.record_element(i == j, groups);
        }
    }
    l
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::{adapt_vqe, AdaptConfig, AnsatzKind};
    use crate::chem::{fci_solve, parse_fcidump};
    use crate::linalg::asymmetry;
    use crate::operators::{build_excitation_pool, build_hamiltonian};
    use crate::simulator::hartree_fock_state;

    const H2: &str = include_str!("../../../../fixtures/h2/h2_sto3g_0.740.fcidump");

    fn h2() -> (SparseOperator, AnsatzCircuit, Vec<f64>) {
        let ints = parse_fcidump(H2).unwrap();
        let h = build_hamiltonian(&ints).unwrap();
        let pool = build_excitation_pool(2, 2);
        let res = adapt_vqe(
            &h,
            &pool,
            &AdaptConfig::default(),
            &hartree_fock_state(4, 2),
        )
        .unwrap();
        let fci = fci_solve(&ints, 4).unwrap().energies;
        (SparseOperator::from_pauli_sum(&h), res.circuit, fci)
    }

    #[test]
    fn h2_roots_match_fci() {
        let (h, u, fci) = h2();
        let basis = EomBasis::singles_doubles(4, 2).unwrap();
        let mut m = build_m_exact(&u, &h, &basis, 0.0).unwrap();
        assert!(asymmetry(&m.values) < 1e-12);
        m.finalize();
        let sol = diagonalize(&m);
        for (a, b) in sol.total_energies.iter().zip(&fci) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
        assert_eq!(sol.excitation_energies[0], 0.0);
    }

    #[test]
    fn identity_ansatz_gives_determinant_hamiltonian() {
        let (h, _, _) = h2();
        let u = AnsatzCircuit::new(AnsatzKind::Uccsd, 4, 2);
        let basis = EomBasis::singles_doubles(4, 2).unwrap();
        let m = build_m_exact(&u, &h, &basis, 0.0).unwrap();
        let dense = build_hamiltonian(&parse_fcidump(H2).unwrap())
            .unwrap()
            .to_dense();
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                let (si, bi) = basis.determinant(i);
                let (sj, bj) = basis.determinant(j);
                let want = si * sj * dense[(bi as usize, bj as usize)].re;
                assert!((m.values[(i, j)] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn shift_moves_every_root() {
        let (h, u, _) = h2();
        let basis = EomBasis::singles_doubles(4, 2).unwrap();
        let a = diagonalize(&build_m_exact(&u, &h, &basis, 0.0).unwrap());
        let mut shifted = build_m_exact(&u, &h, &basis, 0.7).unwrap();
        let raw = crate::linalg::sym_eigh(&shifted.values).0;
        for (x, y) in raw.iter().zip(&a.total_energies) {
            assert!((x - (y - 0.7)).abs() < 1e-12);
        }
        shifted.finalize();
        let b = diagonalize(&shifted);
        for (x, y) in a.total_energies.iter().zip(&b.total_energies) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn finalize_is_idempotent() {
        let mut m = EomMatrix::zeros(3, 0.0);
        m.values = DMatrix::from_row_slice(3, 3, &[1.0, 0.3, 0.1, 0.2, 2.0, 0.7, 0.4, 0.5, 3.0]);
        m.finalize();
        let once = m.clone();
        m.finalize();
        assert_eq!(once, m);
    }

    #[test]
    fn diagonal_matrix_eigenvalues() {
        let mut m = EomMatrix::zeros(2, 0.0);
        m.set(0, 0, -1.5, 0.0, 0, 0.0);
        m.set(1, 1, 0.25, 0.0, 0, 0.0);
        m.finalize();
        assert_eq!(diagonalize(&m).total_energies, vec![-1.5, 0.25]);
    }

    #[test]
    fn brute_ledger_counts() {
        let l = brute_force_ledger(4, 5);
        assert_eq!(l.elements_evaluated, 10);
        assert_eq!(l.circuits_executed, 16 * 5);
    }
}

//! Exact diagonalization in a fixed (N, Sz) sector. Matrix elements come from
//! applying second-quantized ladder products to determinants, independent of the
//! Pauli-string path.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::MolecularIntegrals;
use crate::error::{Error, Result};
use crate::linalg::sym_eigh;
use crate::operators::fermion::{apply_ladders, Ladder};
use crate::par;
use crate::simulator::Statevector;

pub const FCI_QUBIT_LIMIT: usize = 24;

#[derive(Debug, Clone)]
pub struct SpectrumReference {
    pub energies: Vec<f64>,
    n_qubits: usize,
    /// Sector determinants (occupation bitstrings) indexing the coefficients.
    pub determinants: Vec<u64>,
    pub coefficients: Vec<Vec<f64>>,
}

impl SpectrumReference {
    pub fn n_roots(&self) -> usize {
        self.energies.len()
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Root `k` as a full qubit-space state.
    pub fn vector(&self, k: usize) -> Statevector {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << self.n_qubits];
        for (&d, &c) in self.determinants.iter().zip(&self.coefficients[k]) {
            amps[d as usize] = Complex64::new(c, 0.0);
        }
        Statevector::from_amplitudes(self.n_qubits, amps).expect("sized by construction")
    }

    pub fn vectors(&self) -> Vec<Statevector> {
        (0..self.n_roots()).map(|k| self.vector(k)).collect()
    }

    pub fn to_csv(&self) -> String {
        spectrum_csv(&self.energies)
    }
}

pub fn spectrum_csv(energies: &[f64]) -> String {
    let mut s = String::from("root_index,energy_hartree\n");
    for (i, e) in energies.iter().enumerate() {
        s.push_str(&format!("{i},{e:.12}\n"));
    }
    s
}

/// Reads `root_index,energy_hartree` rows; `#` lines are comments.
pub fn parse_spectrum_csv(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') || line.starts_with("root_index") {
            continue;
        }
        let (_, e) = line
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("bad spectrum row '{line}'")))?;
        out.push(
            e.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad energy '{e}'")))?,
        );
    }
    Ok(out)
}

/// All determinants with `n_alpha` even-indexed and `n_beta` odd-indexed qubits set.
pub fn sector_determinants(n_spatial: usize, n_alpha: usize, n_beta: usize) -> Vec<u64> {
    let alpha = combinations(n_spatial, n_alpha);
    let beta = combinations(n_spatial, n_beta);
    let mut dets = Vec::with_capacity(alpha.len() * beta.len());
    for &a in &alpha {
        for &b in &beta {
            dets.push(interleave(a, 0) | interleave(b, 1));
        }
    }
    dets.sort_unstable();
    dets
}

fn combinations(n: usize, k: usize) -> Vec<u64> {
    (0u64..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .collect()
}

fn interleave(mask: u64, spin: usize) -> u64 {
    let mut out = 0;
    let mut m = mask;
    while m != 0 {
        let p = m.trailing_zeros() as usize;
        out |= 1 << (2 * p + spin);
        m &= m - 1;
    }
    out
}

/// Dense sector Hamiltonian over `dets` (which must be closed under H).
pub fn sector_hamiltonian(ints: &MolecularIntegrals, dets: &[u64]) -> DMatrix<f64> {
    let index: HashMap<u64, usize> = dets.iter().enumerate().map(|(i, &d)| (d, i)).collect();
    let n = ints.n_spatial;
    let nq = 2 * n;
    let cols: Vec<Vec<(usize, f64)>> = par::map(dets, |&d| {
        let mut acc: HashMap<usize, f64> = HashMap::new();
        let mut push = |bits: u64, v: f64| {
            if let Some(&j) = index.get(&bits) {
                *acc.entry(j).or_default() += v;
            }
        };
        push(d, ints.core_energy);
        let occ: Vec<usize> = (0..nq).filter(|m| d >> m & 1 == 1).collect();
        for &qm in &occ {
            let (q, sigma) = (qm / 2, qm % 2);
            for p in 0..n {
                let h = ints.h[(p, q)];
                if h == 0.0 {
                    continue;
                }
                let ops = [Ladder::create(2 * p + sigma), Ladder::annihilate(qm)];
                if let Some((s, b)) = apply_ladders(&ops, d) {
                    push(b, s * h);
                }
            }
        }
        for &qm in &occ {
            let (q, sigma) = (qm / 2, qm % 2);
            for &sm in &occ {
                if sm == qm {
                    continue;
                }
                let (s_, tau) = (sm / 2, sm % 2);
                for r in 0..n {
                    for p in 0..n {
                        let g = ints.g(p, q, r, s_);
                        if g == 0.0 {
                            continue;
                        }
                        let ops = [
                            Ladder::create(2 * p + sigma),
                            Ladder::create(2 * r + tau),
                            Ladder::annihilate(sm),
                            Ladder::annihilate(qm),
                        ];
                        if let Some((s, b)) = apply_ladders(&ops, d) {
                            push(b, 0.5 * s * g);
                        }
                    }
                }
            }
        }
        let mut v: Vec<(usize, f64)> = acc.into_iter().collect();
        v.sort_unstable_by_key(|e| e.0);
        v
    });
    let dim = dets.len();
    let mut m = DMatrix::zeros(dim, dim);
    for (j, col) in cols.into_iter().enumerate() {
        for (i, v) in col {
            m[(i, j)] = v;
        }
    }
    m
}

/// Lowest `n_roots` eigenpairs in the `(n_electrons, ms2)` sector.
pub fn fci_solve(ints: &MolecularIntegrals, n_roots: usize) -> Result<SpectrumReference> {
    ints.validate()?;
    let nq = ints.n_qubits();
    if nq > FCI_QUBIT_LIMIT {
        return Err(Error::TooManyQubits {
            qubits: nq,
            limit: FCI_QUBIT_LIMIT,
        });
    }
    let dets = sector_determinants(ints.n_spatial, ints.n_alpha(), ints.n_beta());
    if n_roots > dets.len() {
        return Err(Error::TooManyRoots {
            requested: n_roots,
            available: dets.len(),
        });
    }
    let m = sector_hamiltonian(ints, &dets);
    let (vals, vecs) = sym_eigh(&m);
    let coefficients = (0..n_roots)
        .map(|k| vecs.column(k).iter().copied().collect())
        .collect();
    Ok(SpectrumReference {
        energies: vals[..n_roots].to_vec(),
        n_qubits: nq,
        determinants: dets,
        coefficients,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chem::parse_fcidump;
    use crate::operators::build_hamiltonian;

    const H2: &str = include_str!("../../../../fixtures/h2/h2_sto3g_0.740.fcidump");

    #[test]
    fn h2_roots_match_jordan_wigner_dense_matrix() {
        let ints = parse_fcidump(H2).unwrap();
        let spectrum = fci_solve(&ints, 4).unwrap();
        assert!((spectrum.energies[0] + 1.137283834489).abs() < 1e-9);
        // Dense JW matrix restricted to the same sector.
        let dense = build_hamiltonian(&ints).unwrap().to_dense();
        let dets = sector_determinants(2, 1, 1);
        let sub = DMatrix::from_fn(dets.len(), dets.len(), |i, j| {
            dense[(dets[i] as usize, dets[j] as usize)].re
        });
        let (vals, _) = sym_eigh(&sub);
        for (a, b) in spectrum.energies.iter().zip(&vals) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_integrals_give_core_energy() {
        let mut ints = MolecularIntegrals::zeros(3, 2, 0);
        ints.core_energy = 0.75;
        let spectrum = fci_solve(&ints, 5).unwrap();
        assert!(spectrum.energies.iter().all(|e| (e - 0.75).abs() < 1e-14));
    }

    #[test]
    fn too_many_roots() {
        let ints = parse_fcidump(H2).unwrap();
        assert_eq!(
            fci_solve(&ints, 10).unwrap_err(),
            Error::TooManyRoots {
                requested: 10,
                available: 4
            }
        );
    }

    #[test]
    fn vectors_are_orthonormal_eigenstates() {
        let ints = parse_fcidump(H2).unwrap();
        let spectrum = fci_solve(&ints, 4).unwrap();
        let h = build_hamiltonian(&ints).unwrap();
        let vs = spectrum.vectors();
        for i in 0..4 {
            for j in 0..4 {
                let ov = vs[i].inner(&vs[j]).norm();
                assert!((ov - if i == j { 1.0 } else { 0.0 }).abs() < 1e-10);
            }
            let e = crate::simulator::expectation(&vs[i], &h).unwrap();
            assert!((e - spectrum.energies[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn sector_size() {
        assert_eq!(sector_determinants(6, 3, 3).len(), 400);
        assert_eq!(
            sector_determinants(2, 1, 1),
            vec![0b0011, 0b0110, 0b1001, 0b1100]
        );
    }

    #[test]
    fn csv_round_trip() {
        let s = spectrum_csv(&[-1.5, 0.25]);
        assert_eq!(parse_spectrum_csv(&s).unwrap(), vec![-1.5, 0.25]);
    }
}

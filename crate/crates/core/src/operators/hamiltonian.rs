use std::collections::HashMap;

use num_complex::Complex64;

use super::fermion::{jordan_wigner_into, spin_orbital, Ladder};
use super::pauli::{PauliString, PauliSum};
use crate::chem::MolecularIntegrals;
use crate::error::Result;

/// Qubit Hamiltonian of the second-quantized electronic Hamiltonian
///
/// `H = Σ_σ Σ_pq h_pq a†_pσ a_qσ + ½ Σ_στ Σ_pqrs (pq|rs) a†_pσ a†_rτ a_sτ a_qσ + E_core`.
pub fn build_hamiltonian(ints: &MolecularIntegrals) -> Result<PauliSum> {
    ints.validate()?;
    let n = ints.n_spatial;
    let n_qubits = 2 * n;
    let mut acc: HashMap<PauliString, Complex64> = HashMap::new();
    acc.insert(PauliString::IDENTITY, Complex64::new(ints.core_energy, 0.0));

    for p in 0..n {
        for q in 0..n {
            let v = ints.h[(p, q)];
            if v == 0.0 {
                continue;
            }
            for s in 0..2 {
                jordan_wigner_into(
                    &[
                        Ladder::create(spin_orbital(p, s)),
                        Ladder::annihilate(spin_orbital(q, s)),
                    ],
                    Complex64::new(v, 0.0),
                    &mut acc,
                );
            }
        }
    }
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let v = ints.g(p, q, r, s);
                    if v == 0.0 {
                        continue;
                    }
                    for sig in 0..2 {
                        for tau in 0..2 {
                            let (ps, qs) = (spin_orbital(p, sig), spin_orbital(q, sig));
                            let (rt, st) = (spin_orbital(r, tau), spin_orbital(s, tau));
                            if ps == rt || qs == st {
                                continue;
                            }
                            jordan_wigner_into(
                                &[
                                    Ladder::create(ps),
                                    Ladder::create(rt),
                                    Ladder::annihilate(st),
                                    Ladder::annihilate(qs),
                                ],
                                Complex64::new(0.5 * v, 0.0),
                                &mut acc,
                            );
                        }
                    }
                }
            }
        }
    }
    // The Hamiltonian is Hermitian; imaginary residue is round-off.
    let terms = acc.into_iter().map(|(p, c)| (p, Complex64::new(c.re, 0.0)));
    Ok(PauliSum::from_terms(n_qubits, terms))
}

/// Total particle number `Σ_p n_p` as a Pauli sum.
pub fn number_operator(n_qubits: usize) -> PauliSum {
    let mut acc = HashMap::new();
    for q in 0..n_qubits {
        jordan_wigner_into(
            &[Ladder::create(q), Ladder::annihilate(q)],
            Complex64::new(1.0, 0.0),
            &mut acc,
        );
    }
    PauliSum::from_terms(n_qubits, acc)
}

/// `Sz = ½ Σ_p (n_pα − n_pβ)`.
pub fn sz_operator(n_qubits: usize) -> PauliSum {
    let mut acc = HashMap::new();
    for q in 0..n_qubits {
        let sign = if q % 2 == 0 { 0.5 } else { -0.5 };
        jordan_wigner_into(
            &[Ladder::create(q), Ladder::annihilate(q)],
            Complex64::new(sign, 0.0),
            &mut acc,
        );
    }
    PauliSum::from_terms(n_qubits, acc)
}

//! Cross-module invariants on real fixtures.

use std::path::PathBuf;

use proptest::prelude::*;
use qsceom::ansatz::uccsd_ansatz;
use qsceom::chem::{fci_solve, parse_fcidump, write_fcidump, MolecularIntegrals};
use qsceom::eom::{build_m_exact, diagonalize, EomBasis};
use qsceom::measurement::{brg_factorize, group_pauli_terms};
use qsceom::operators::{build_excitation_pool, build_hamiltonian, number_operator, sz_operator};
use qsceom::simulator::SparseOperator;

fn fixture(rel: &str) -> MolecularIntegrals {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(rel);
    parse_fcidump(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn h4() -> MolecularIntegrals {
    fixture("hchain/h4_sto3g_1.500.fcidump")
}

#[test]
fn every_fixture_round_trips_through_fcidump_text() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let mut seen = 0;
    for dir in ["h2", "h2/scan", "h4", "hchain", "nh3", "h2o"] {
        for e in std::fs::read_dir(root.join(dir)).unwrap() {
            let p = e.unwrap().path();
            if p.extension().is_some_and(|x| x == "fcidump") {
                let a = parse_fcidump(&std::fs::read_to_string(&p).unwrap()).unwrap();
                let b = parse_fcidump(&write_fcidump(&a)).unwrap();
                assert_eq!(a, b, "{}", p.display());
                seen += 1;
            }
        }
    }
    assert!(seen >= 50);
}

#[test]
fn hamiltonian_commutes_with_number_and_spin() {
    let ints = h4();
    let h = build_hamiltonian(&ints).unwrap();
    for op in [number_operator(8), sz_operator(8)] {
        let c = h.commutator(&op);
        assert!(c.terms().all(|(_, v)| v.norm() < 1e-10));
    }
}

#[test]
fn grouping_is_a_partition_of_the_non_identity_terms() {
    let h = build_hamiltonian(&h4()).unwrap();
    let g = group_pauli_terms(&h).unwrap();
    let mut members: Vec<String> = g
        .groups
        .iter()
        .flat_map(|gr| gr.members.iter().map(|(p, _)| p.label()))
        .collect();
    let n = members.len();
    members.sort();
    members.dedup();
    assert_eq!(members.len(), n);
    assert_eq!(n, h.terms().filter(|(p, _)| !p.is_identity()).count());
    assert_eq!(group_pauli_terms(&h).unwrap(), g);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fci_is_invariant_under_orbital_relabelling(perm in Just(vec![0usize, 1, 2, 3]).prop_shuffle()) {
        let ints = h4();
        let a = fci_solve(&ints, 3).unwrap().energies;
        let b = fci_solve(&ints.permuted(&perm), 3).unwrap().energies;
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn eom_roots_never_fall_below_fci(params in prop::collection::vec(-0.3f64..0.3, 26)) {
        let ints = h4();
        let (nq, ne) = (ints.n_qubits(), ints.n_electrons);
        let pool = build_excitation_pool(ne, nq - ne);
        let mut circuit = uccsd_ansatz(&pool, nq, ne);
        prop_assume!(circuit.n_params() == params.len());
        circuit.params = params;
        let sparse = SparseOperator::from_pauli_sum(&build_hamiltonian(&ints).unwrap());
        let basis = EomBasis::singles_doubles(nq, ne).unwrap();
        let roots = diagonalize(&build_m_exact(&circuit, &sparse, &basis, 0.0).unwrap()).total_energies;
        let fci = fci_solve(&ints, roots.len()).unwrap().energies;
        for (r, f) in roots.iter().zip(&fci) {
            prop_assert!(*r >= f - 1e-10, "{r} < {f}");
        }
    }

    #[test]
    fn brg_rank_shrinks_as_tolerance_loosens(e1 in -12.0f64..-1.0, e2 in -12.0f64..-1.0) {
        let ints = h4();
        let (lo, hi) = if e1 < e2 { (10f64.powf(e1), 10f64.powf(e2)) } else { (10f64.powf(e2), 10f64.powf(e1)) };
        let a = brg_factorize(&ints, lo).unwrap();
        let b = brg_factorize(&ints, hi).unwrap();
        prop_assert!(a.rank() >= b.rank());
        prop_assert!(a.reconstruction_error(&ints) <= lo + 1e-12);
    }
}

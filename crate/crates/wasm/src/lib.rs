//! Browser bindings: small q-sc-EOM calculations on FCIDUMP text pasted into a page.

use std::fmt::Write as _;

use qsceom::ansatz::{adapt_vqe, AdaptConfig};
use qsceom::chem::{fci_solve, parse_fcidump, MolecularIntegrals};
use qsceom::eom::{build_m_exact, diagonalize, EomBasis};
use qsceom::measurement::{brg_factorize, group_pauli_terms};
use qsceom::operators::{build_excitation_pool, build_hamiltonian};
use qsceom::simulator::{hartree_fock_state, SparseOperator};
use qsceom::Error;
use wasm_bindgen::prelude::*;

/// Statevector work in the page stays below this many qubits.
pub const MAX_QUBITS: usize = 12;

fn load(fcidump: &str) -> Result<MolecularIntegrals, Error> {
    let ints = parse_fcidump(fcidump)?;
    if ints.n_qubits() > MAX_QUBITS {
        return Err(Error::Parse(format!(
            "{} qubits is too large for the browser (max {MAX_QUBITS})",
            ints.n_qubits()
        )));
    }
    Ok(ints)
}

/// `root,eom_energy,fci_energy,error` rows for an ADAPT ground state and exact expectations.
pub fn spectrum(fcidump: &str, roots: usize) -> Result<String, Error> {
    let ints = load(fcidump)?;
    let (nq, ne) = (ints.n_qubits(), ints.n_electrons);
    let h = build_hamiltonian(&ints)?;
    let sparse = SparseOperator::from_pauli_sum(&h);
    let pool = build_excitation_pool(ne, nq - ne);
    let ground = adapt_vqe(
        &h,
        &pool,
        &AdaptConfig::default(),
        &hartree_fock_state(nq, ne),
    )?;
    let basis = EomBasis::singles_doubles(nq, ne)?;
    let eom = diagonalize(&build_m_exact(&ground.circuit, &sparse, &basis, 0.0)?).total_energies;
    let k = roots.min(eom.len());
    let fci = fci_solve(&ints, k)?.energies;
    let mut s = String::from("root,eom_energy,fci_energy,error\n");
    for (r, (e, f)) in eom.iter().zip(&fci).enumerate().take(k) {
        let _ = writeln!(s, "{r},{e:.10},{f:.10},{:.3e}", e - f);
    }
    Ok(s)
}

/// `tolerance,rank,groups` rows.
pub fn brg_counts(fcidump: &str, tolerances: &[f64]) -> Result<String, Error> {
    let ints = parse_fcidump(fcidump)?;
    let mut s = String::from("tolerance,rank,groups\n");
    for &tol in tolerances {
        let f = brg_factorize(&ints, tol)?;
        let _ = writeln!(s, "{tol:e},{},{}", f.rank(), f.group_count());
    }
    Ok(s)
}

/// `group_id,basis_pattern,member_count` rows for qubit-wise compatible grouping.
pub fn pauli_groups(fcidump: &str) -> Result<String, Error> {
    let ints = load(fcidump)?;
    let grouping = group_pauli_terms(&build_hamiltonian(&ints)?)?;
    let mut s = String::from("group_id,basis_pattern,member_count\n");
    for (k, g) in grouping.groups.iter().enumerate() {
        let _ = writeln!(s, "{k},{},{}", g.pattern_label(), g.members.len());
    }
    Ok(s)
}

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen(js_name = spectrum)]
pub fn spectrum_js(fcidump: &str, roots: usize) -> Result<String, JsError> {
    spectrum(fcidump, roots).map_err(js)
}

#[wasm_bindgen(js_name = brgCounts)]
pub fn brg_counts_js(fcidump: &str, tolerances: Vec<f64>) -> Result<String, JsError> {
    brg_counts(fcidump, &tolerances).map_err(js)
}

#[wasm_bindgen(js_name = pauliGroups)]
pub fn pauli_groups_js(fcidump: &str) -> Result<String, JsError> {
    pauli_groups(fcidump).map_err(js)
}

//! Qubit-wise compatible grouping of Pauli terms.

use crate::error::{Error, Result};
use crate::operators::{Axis, PauliString, PauliSum};
use crate::simulator::sampling::diagonal_value;
use crate::simulator::BasisPattern;

/// Terms sharing one single-qubit measurement basis.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementGroup {
    pub pattern: BasisPattern,
    pub members: Vec<(PauliString, f64)>,
}

impl MeasurementGroup {
    fn new(n_qubits: usize) -> Self {
        Self {
            pattern: vec![None; n_qubits],
            members: Vec::new(),
        }
    }

    fn accepts(&self, p: &PauliString) -> bool {
        p.axes()
            .all(|(q, a)| self.pattern[q].is_none_or(|have| have == a))
    }

    fn insert(&mut self, p: PauliString, c: f64) {
        for (q, a) in p.axes() {
            self.pattern[q] = Some(a);
        }
        self.members.push((p, c));
    }

    /// True when no basis change is needed (I/Z-only members).
    pub fn is_z_only(&self) -> bool {
        self.pattern
            .iter()
            .all(|a| matches!(a, None | Some(Axis::Z)))
    }

    /// Members as Z-strings on their support, valid after the basis change.
    pub fn rotated_terms(&self) -> Vec<(u64, f64)> {
        self.members
            .iter()
            .map(|(p, c)| (p.support(), *c))
            .collect()
    }

    /// `Σ_ℓ c_ℓ (−1)^{|b ∧ supp ℓ|}` for a bitstring measured in the group basis.
    pub fn value(&self, b: u64) -> f64 {
        diagonal_value(&self.rotated_terms(), b)
    }

    /// Pattern with qubit 0 rightmost and `-` for unconstrained qubits.
    pub fn pattern_label(&self) -> String {
        self.pattern
            .iter()
            .rev()
            .map(|a| a.map_or('-', |a| a.symbol()))
            .collect()
    }
}

/// Grouped observable: a constant offset plus measured groups.
#[derive(Debug, Clone, PartialEq)]
pub struct Grouping {
    pub n_qubits: usize,
    pub constant: f64,
    pub groups: Vec<MeasurementGroup>,
}

impl Grouping {
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("group_id,basis_pattern,member_count\n");
        for (k, g) in self.groups.iter().enumerate() {
            s.push_str(&format!("{k},{},{}\n", g.pattern_label(), g.members.len()));
        }
        s
    }
}

/// Greedy first-fit in the canonical (x-mask, z-mask) term order.
pub fn group_pauli_terms(observable: &PauliSum) -> Result<Grouping> {
    if !observable.is_hermitian(1e-10) {
        return Err(Error::NotHermitian);
    }
    let n = observable.n_qubits();
    let mut constant = 0.0;
    let mut groups: Vec<MeasurementGroup> = Vec::new();
    for (p, c) in observable.terms() {
        if p.is_identity() {
            constant += c.re;
            continue;
        }
        match groups.iter_mut().find(|g| g.accepts(p)) {
            Some(g) => g.insert(*p, c.re),
            None => {
                let mut g = MeasurementGroup::new(n);
                g.insert(*p, c.re);
                groups.push(g);
            }
        }
    }
    Ok(Grouping {
        n_qubits: n,
        constant,
        groups,
    })
}

use super::MolecularIntegrals;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActiveSpace {
    pub active_orbitals: Vec<usize>,
    pub n_active_electrons: usize,
}

impl ActiveSpace {
    pub fn new(active_orbitals: Vec<usize>, n_active_electrons: usize) -> Self {
        Self {
            active_orbitals,
            n_active_electrons,
        }
    }

    /// `n_orbitals` contiguous orbitals placed so that `n_electrons` sit around the Fermi level.
    pub fn around_fermi_level(
        ints: &MolecularIntegrals,
        n_electrons: usize,
        n_orbitals: usize,
    ) -> Result<Self> {
        if n_electrons > ints.n_electrons || !(ints.n_electrons - n_electrons).is_multiple_of(2) {
            return Err(Error::InvalidActiveSpace(format!(
                "{n_electrons} active electrons from {} total",
                ints.n_electrons
            )));
        }
        let n_core = (ints.n_electrons - n_electrons) / 2;
        if n_core + n_orbitals > ints.n_spatial {
            return Err(Error::InvalidActiveSpace(format!(
                "{n_core} core + {n_orbitals} active orbitals exceed {}",
                ints.n_spatial
            )));
        }
        Ok(Self::new(
            (n_core..n_core + n_orbitals).collect(),
            n_electrons,
        ))
    }

    /// Non-active orbitals below the lowest active index.
    pub fn core_orbitals(&self, n_spatial: usize) -> Vec<usize> {
        let lo = self
            .active_orbitals
            .iter()
            .copied()
            .min()
            .unwrap_or(n_spatial);
        (0..lo)
            .filter(|p| !self.active_orbitals.contains(p))
            .collect()
    }
}

/// Folds a doubly occupied core into the one-body term and core energy and drops
/// every other inactive orbital.
pub fn restrict_active(
    ints: &MolecularIntegrals,
    space: &ActiveSpace,
) -> Result<MolecularIntegrals> {
    let act = &space.active_orbitals;
    if act.is_empty() {
        return Err(Error::InvalidActiveSpace("no active orbitals".into()));
    }
    for (k, &p) in act.iter().enumerate() {
        if p >= ints.n_spatial {
            return Err(Error::IndexOutOfRange {
                index: p,
                limit: ints.n_spatial,
            });
        }
        if act[..k].contains(&p) {
            return Err(Error::InvalidActiveSpace(format!(
                "orbital {p} listed twice"
            )));
        }
    }
    let core = space.core_orbitals(ints.n_spatial);
    let ne = space.n_active_electrons;
    if 2 * core.len() + ne != ints.n_electrons {
        return Err(Error::InvalidActiveSpace(format!(
            "{} core orbitals and {ne} active electrons do not account for {} electrons",
            core.len(),
            ints.n_electrons
        )));
    }
    if ne > 2 * act.len() {
        return Err(Error::InvalidActiveSpace(format!(
            "{ne} electrons do not fit in {} orbitals",
            act.len()
        )));
    }
    if (ne as i32 - ints.ms2).rem_euclid(2) != 0 || ints.ms2.unsigned_abs() as usize > ne {
        return Err(Error::InvalidActiveSpace(format!(
            "MS2={} is inconsistent with {ne} electrons",
            ints.ms2
        )));
    }

    let n = act.len();
    let mut out = MolecularIntegrals::zeros(n, ne, ints.ms2);
    out.core_energy = ints.core_energy;
    for &c in &core {
        out.core_energy += 2.0 * ints.h[(c, c)];
        for &d in &core {
            out.core_energy += 2.0 * ints.g(c, c, d, d) - ints.g(c, d, d, c);
        }
    }
    for (a, &p) in act.iter().enumerate() {
        for (b, &q) in act.iter().enumerate() {
            let mut v = ints.h[(p, q)];
            for &c in &core {
                v += 2.0 * ints.g(p, q, c, c) - ints.g(p, c, c, q);
            }
            out.h[(a, b)] = v;
        }
    }
    for (a, &p) in act.iter().enumerate() {
        for (b, &q) in act.iter().enumerate() {
            for (c, &r) in act.iter().enumerate() {
                for (d, &s) in act.iter().enumerate() {
                    let idx = out.g_index(a, b, c, d);
                    out.g[idx] = ints.g(p, q, r, s);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chem::{fci_solve, parse_fcidump};

    const H2O: &str = include_str!("../../../../fixtures/h2o/h2o_sto3g_0.940.fcidump");

    #[test]
    fn full_space_is_identity() {
        let ints = parse_fcidump(H2O).unwrap();
        let space = ActiveSpace::new((0..ints.n_spatial).collect(), ints.n_electrons);
        assert_eq!(restrict_active(&ints, &space).unwrap(), ints);
    }

    #[test]
    fn h2o_two_by_two() {
        let ints = parse_fcidump(H2O).unwrap();
        let space = ActiveSpace::around_fermi_level(&ints, 2, 2).unwrap();
        assert_eq!(space.active_orbitals, vec![4, 5]);
        let red = restrict_active(&ints, &space).unwrap();
        assert_eq!(red.n_qubits(), 4);
        red.validate().unwrap();
    }

    #[test]
    fn frozen_core_preserves_energy_when_core_is_exact() {
        // Orbital 0 couples to the rest only through Coulomb integrals, so it stays
        // doubly occupied in every low-lying state.
        let mut ints = MolecularIntegrals::zeros(3, 4, 0);
        ints.core_energy = 0.3;
        ints.set_h_symmetric(0, 0, -5.0);
        ints.set_h_symmetric(1, 1, -1.0);
        ints.set_h_symmetric(2, 2, 0.4);
        ints.set_h_symmetric(1, 2, 0.15);
        ints.set_g_symmetric(0, 0, 0, 0, 1.1);
        ints.set_g_symmetric(0, 0, 1, 1, 0.6);
        ints.set_g_symmetric(0, 0, 2, 2, 0.5);
        ints.set_g_symmetric(1, 1, 1, 1, 0.7);
        ints.set_g_symmetric(2, 2, 2, 2, 0.65);
        ints.set_g_symmetric(1, 1, 2, 2, 0.55);
        ints.set_g_symmetric(1, 2, 1, 2, 0.12);
        ints.set_g_symmetric(1, 1, 1, 2, 0.03);
        let full = fci_solve(&ints, 1).unwrap().energies[0];
        let red = restrict_active(&ints, &ActiveSpace::new(vec![1, 2], 2)).unwrap();
        let act = fci_solve(&red, 1).unwrap().energies[0];
        assert!((full - act).abs() < 1e-10, "{full} vs {act}");
    }

    #[test]
    fn electron_count_checked() {
        let ints = parse_fcidump(H2O).unwrap();
        assert!(restrict_active(&ints, &ActiveSpace::new(vec![4, 5], 4)).is_err());
        assert!(restrict_active(&ints, &ActiveSpace::new(vec![4, 4], 2)).is_err());
        assert!(restrict_active(&ints, &ActiveSpace::new(vec![9], 2)).is_err());
    }
}

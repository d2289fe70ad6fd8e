//! Single-fixture utilities: the qubit Hamiltonian and the FCI spectrum.

use qsceom::measurement::group_pauli_terms;

use crate::config::Config;
use crate::error::Result;
use crate::output::{fmt, RunDir, Table};
use crate::run::{fci_energies, load_system};

pub fn dump_hamiltonian(cfg: &Config) -> Result<()> {
    let sys = load_system(&cfg.path("system.fixture")?, cfg)?;
    let out = RunDir::create(cfg, "dump-hamiltonian")?;
    let mut terms = Table::new(&["pauli", "coefficient"]);
    for (p, c) in sys.h.terms() {
        terms.push(vec![p.label(), format!("{:.15e}", c.re)]);
    }
    out.write_table("hamiltonian.csv", &terms)?;
    let grouping = group_pauli_terms(&sys.h)?;
    let mut groups = Table::new(&["group_id", "basis_pattern", "member_count"]);
    for (k, g) in grouping.groups.iter().enumerate() {
        groups.push(vec![
            k.to_string(),
            g.pattern_label(),
            g.members.len().to_string(),
        ]);
    }
    out.write_table("groups.csv", &groups)?;
    Ok(())
}

pub fn fci(cfg: &Config) -> Result<()> {
    let sys = load_system(&cfg.path("system.fixture")?, cfg)?;
    let out = RunDir::create(cfg, "fci")?;
    let mut t = Table::new(&["root_index", "energy_hartree"]);
    for (k, e) in fci_energies(&sys, cfg.usize("eom.roots")?)?
        .iter()
        .enumerate()
    {
        t.push(vec![k.to_string(), fmt(*e)]);
    }
    out.write_table("fci.csv", &t)?;
    Ok(())
}

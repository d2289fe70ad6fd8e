//! Ground and excited states along a scan of geometries.

use qsceom::ansatz::AnsatzKind;
use qsceom::derive_seed;
use rayon::prelude::*;

use crate::config::Config;
use crate::error::Result;
use crate::output::{fmt, fmt_sci, RunDir, Table};
use crate::plot::{Plot, Series, Style};
use crate::run::{fci_energies, ground_state, load_system, require_files, run_eom, EomSettings};

pub fn run(cfg: &Config) -> Result<()> {
    let files = cfg.paths("system.scan")?;
    require_files(&files)?;
    let settings = EomSettings::from_config(cfg)?;
    let kind = AnsatzKind::parse(cfg.str("ansatz.kind"))?;
    let master = cfg.u64("run.seed")?;
    let out = RunDir::create(cfg, "pes")?;

    let results = files
        .par_iter()
        .enumerate()
        .map(|(k, path)| -> Result<_> {
            let seed = derive_seed(master, k as u64);
            let sys = load_system(path, cfg)?;
            let (ground, e0) = ground_state(&sys, cfg, kind, seed)?;
            let eom = run_eom(&sys, &ground, &settings, seed)?;
            let fci = fci_energies(&sys, eom.roots.len())?;
            Ok((
                k,
                sys.distance,
                sys.name,
                ground.n_params(),
                e0,
                eom,
                fci,
                seed,
            ))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut pes = Table::new(&["distance", "root", "eom_energy", "fci_energy", "error"]);
    let mut runs = Table::new(&[
        "distance",
        "system",
        "ansatz_parameters",
        "ground_energy",
        "n_basis",
        "groups",
        "elements_evaluated",
        "circuits_executed",
        "shots_consumed",
        "flagged_settings",
        "seed",
    ]);
    for (k, distance, name, n_params, e0, eom, fci, seed) in &results {
        let d = distance.unwrap_or(*k as f64);
        for (r, (e, f)) in eom.roots.iter().zip(fci).enumerate() {
            pes.push(vec![
                fmt(d),
                r.to_string(),
                fmt(*e),
                fmt(*f),
                fmt_sci(e - f),
            ]);
        }
        runs.push(vec![
            fmt(d),
            name.clone(),
            n_params.to_string(),
            fmt(*e0),
            eom.n_basis.to_string(),
            eom.groups.to_string(),
            eom.ledger.elements_evaluated.to_string(),
            eom.ledger.circuits_executed.to_string(),
            eom.ledger.shots_consumed.to_string(),
            eom.flagged.to_string(),
            seed.to_string(),
        ]);
    }
    out.write_table("pes.csv", &pes)?;
    out.write_table("pes_runs.csv", &runs)?;
    out.write_text("pes.svg", &plot(&pes).render())?;
    Ok(())
}

/// FCI curves as lines, q-sc-EOM roots as markers.
pub fn plot(pes: &Table) -> Plot {
    let d = pes.numbers("distance");
    let root = pes.numbers("root");
    let eom = pes.numbers("eom_energy");
    let fci = pes.numbers("fci_energy");
    let n_roots = root.iter().fold(0.0f64, |a, &b| a.max(b)) as usize + 1;
    let mut series = Vec::new();
    for r in 0..n_roots {
        let pick = |v: &[f64]| -> Vec<(f64, f64)> {
            (0..d.len())
                .filter(|&i| root[i] as usize == r)
                .map(|i| (d[i], v[i]))
                .collect()
        };
        series.push(Series {
            label: format!("FCI {r}"),
            points: pick(&fci),
            style: Style::Line,
        });
        series.push(Series {
            label: format!("q-sc-EOM {r}"),
            points: pick(&eom),
            style: Style::Markers,
        });
    }
    Plot {
        title: "Potential energy surface".into(),
        x_label: "bond distance (Å)".into(),
        y_label: "energy (Ha)".into(),
        series,
        ..Default::default()
    }
}

//! BRG group counts across chain lengths and the EOM error it introduces.

use qsceom::ansatz::AnsatzKind;
use qsceom::derive_seed;
use qsceom::measurement::brg_factorize;
use rayon::prelude::*;

use crate::config::Config;
use crate::error::Result;
use crate::output::{fmt_sci, RunDir, Table};
use crate::plot::{Plot, Series, Style};
use crate::run::{
    ground_state, load_integrals, load_system, require_files, run_eom, EomSettings, SchemeKind,
    System,
};

pub fn run(cfg: &Config) -> Result<()> {
    let systems = cfg.paths("brg_sweep.systems")?;
    require_files(&systems)?;
    let tolerances = cfg.f64_list("brg_sweep.tolerances")?;
    let out = RunDir::create(cfg, "brg-sweep")?;

    let counts = systems
        .par_iter()
        .map(|path| -> Result<Vec<Vec<String>>> {
            let ints = load_integrals(path, cfg)?;
            let name = path
                .file_stem()
                .map_or_else(String::new, |s| s.to_string_lossy().into_owned());
            tolerances
                .iter()
                .map(|&tol| {
                    let f = brg_factorize(&ints, tol)?;
                    Ok(vec![
                        name.clone(),
                        ints.n_spatial.to_string(),
                        fmt_sci(tol),
                        f.rank().to_string(),
                        f.group_count().to_string(),
                    ])
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(&["system", "n_orbitals", "tolerance", "rank", "groups"]);
    let mut counts: Vec<Vec<String>> = counts.into_iter().flatten().collect();
    counts.sort_by_key(|r| r[1].parse::<usize>().unwrap_or(0));
    counts.into_iter().for_each(|r| table.push(r));
    out.write_table("brg_counts.csv", &table)?;
    out.write_text("brg_counts.svg", &counts_plot(&table).render())?;

    let master = cfg.u64("run.seed")?;
    if !cfg.str("brg_sweep.error_fixture").is_empty() {
        let sys = load_system(&cfg.path("brg_sweep.error_fixture")?, cfg)?;
        let tols = cfg.f64_list("brg_sweep.error_tolerances")?;
        let mut t = Table::new(&["system", "tolerance", "groups", "max_root_error"]);
        for row in brg_errors(&sys, cfg, &tols, derive_seed(master, 0))? {
            t.push(row);
        }
        out.write_table("brg_tolerance_error.csv", &t)?;
        out.write_text(
            "brg_tolerance_error.svg",
            &error_plot(&t, "tolerance", true).render(),
        )?;
    }
    if !cfg.str("brg_sweep.error_systems").is_empty() {
        let paths = cfg.paths("brg_sweep.error_systems")?;
        require_files(&paths)?;
        let tol = cfg.f64("brg_sweep.error_tolerance")?;
        let rows = paths
            .par_iter()
            .enumerate()
            .map(|(k, p)| {
                let sys = load_system(p, cfg)?;
                let mut rows = brg_errors(&sys, cfg, &[tol], derive_seed(master, 1 + k as u64))?;
                rows[0].insert(1, sys.ints.n_spatial.to_string());
                Ok(rows.remove(0))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut t = Table::new(&[
            "system",
            "n_orbitals",
            "tolerance",
            "groups",
            "max_root_error",
        ]);
        rows.into_iter().for_each(|r| t.push(r));
        out.write_table("brg_chain_error.csv", &t)?;
        out.write_text(
            "brg_chain_error.svg",
            &error_plot(&t, "n_orbitals", false).render(),
        )?;
    }
    Ok(())
}

/// Largest root deviation of infinite-shot BRG-estimated q-sc-EOM from exact elements.
fn brg_errors(
    sys: &System,
    cfg: &Config,
    tolerances: &[f64],
    seed: u64,
) -> Result<Vec<Vec<String>>> {
    let (ground, _) = ground_state(sys, cfg, AnsatzKind::Adapt, seed)?;
    let mut settings = EomSettings::from_config(cfg)?;
    settings.scheme = SchemeKind::Exact;
    settings.davidson = false;
    settings.budget = 0;
    let exact = run_eom(sys, &ground, &settings, seed)?.roots;
    tolerances
        .iter()
        .map(|&tol| {
            settings.scheme = SchemeKind::Brg;
            settings.brg_tolerance = tol;
            let run = run_eom(sys, &ground, &settings, seed)?;
            let err = run
                .roots
                .iter()
                .zip(&exact)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            Ok(vec![
                sys.name.clone(),
                fmt_sci(tol),
                run.groups.to_string(),
                fmt_sci(err),
            ])
        })
        .collect()
}

pub fn counts_plot(t: &Table) -> Plot {
    let n = t.numbers("n_orbitals");
    let tol = t.numbers("tolerance");
    let g = t.numbers("groups");
    let mut tols: Vec<f64> = Vec::new();
    for &v in &tol {
        if !tols.contains(&v) {
            tols.push(v);
        }
    }
    let series = tols
        .iter()
        .map(|&tv| Series {
            label: format!("tol {tv:e}"),
            points: (0..n.len())
                .filter(|&i| tol[i] == tv)
                .map(|i| (n[i], g[i]))
                .collect(),
            style: Style::LineMarkers,
        })
        .collect();
    Plot {
        title: "BRG measurement groups".into(),
        x_label: "spatial orbitals".into(),
        y_label: "groups".into(),
        series,
        ..Default::default()
    }
}

pub fn error_plot(t: &Table, x: &str, log_x: bool) -> Plot {
    let xs = t.numbers(x);
    let es = t.numbers("max_root_error");
    Plot {
        title: "BRG q-sc-EOM error".into(),
        x_label: x.replace('_', " "),
        y_label: "max |root error| (Ha)".into(),
        log_x,
        log_y: true,
        series: vec![Series {
            label: "max root error".into(),
            points: xs
                .into_iter()
                .zip(es)
                .map(|(a, b)| (a, b.max(1e-16)))
                .collect(),
            style: Style::LineMarkers,
        }],
        hlines: vec![(1e-6, "1e-6 Ha".into())],
        ..Default::default()
    }
}

//! Ansatz accuracy against FCI and a gradient vs derivative-free optimizer comparison.

use std::cell::Cell;

use qsceom::ansatz::{
    optimize, perturb_parameters, AnsatzCircuit, AnsatzKind, Method, Objective, OptimizeOptions,
};
use qsceom::derive_seed;
use qsceom::measurement::{group_pauli_terms, Grouping};
use qsceom::simulator::{sample_counts, NoiseModel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::Config;
use crate::error::{CliError, Result};
use crate::output::{fmt, fmt_sci, RunDir, Table};
use crate::plot::{Plot, Series, Style};
use crate::run::{fci_energies, ground_state, load_system, System};

pub const CHEMICAL_ACCURACY: f64 = 1.59e-3;

/// Energy estimated from `shots` samples per measurement group; every call draws fresh samples.
struct SampledEnergy<'a> {
    circuit: &'a AnsatzCircuit,
    grouping: &'a Grouping,
    shots: u64,
    seed: u64,
    calls: Cell<u64>,
}

impl Objective for SampledEnergy<'_> {
    fn value(&self, x: &[f64]) -> f64 {
        let k = self.calls.get();
        self.calls.set(k + 1);
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(self.seed, k));
        let state = self.circuit.state_from(&self.circuit.reference(), x);
        let noise = NoiseModel::noiseless();
        let mut e = self.grouping.constant;
        for g in &self.grouping.groups {
            let counts = sample_counts(&state, &g.pattern, self.shots, &noise, &mut rng);
            let sum: f64 = counts
                .counts
                .iter()
                .map(|(&b, &c)| c as f64 * g.value(b))
                .sum();
            e += sum / self.shots as f64;
        }
        e
    }
}

pub fn run(cfg: &Config) -> Result<()> {
    let sys = load_system(&cfg.path("system.fixture")?, cfg)?;
    let out = RunDir::create(cfg, "ansatz-bench")?;
    let master = cfg.u64("run.seed")?;
    let fci = fci_energies(&sys, 1)?[0];

    let kinds = cfg
        .list("ansatz_bench.ansatze")
        .iter()
        .map(|k| AnsatzKind::parse(k))
        .collect::<qsceom::Result<Vec<_>>>()?;
    let results = kinds
        .par_iter()
        .enumerate()
        .map(|(k, &kind)| {
            ground_state(&sys, cfg, kind, derive_seed(master, k as u64)).map(|r| (kind, r))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = Table::new(&[
        "ansatz",
        "parameters",
        "energy",
        "fci_energy",
        "error",
        "below_chemical_accuracy",
    ]);
    let mut adapt_circuit = None;
    for (kind, (circuit, e)) in &results {
        let err = e - fci;
        table.push(vec![
            kind.name().to_string(),
            circuit.n_params().to_string(),
            fmt(*e),
            fmt(fci),
            fmt_sci(err),
            (err.abs() < CHEMICAL_ACCURACY).to_string(),
        ]);
        if *kind == AnsatzKind::Adapt {
            adapt_circuit = Some(circuit.clone());
        }
    }
    out.write_table("ansatz_bench.csv", &table)?;
    out.write_text("ansatz_bench.svg", &plot(&table).render())?;

    // The optimizer comparison reuses the ADAPT operator sequence, restarted near its optimum.
    let Some(circuit) = adapt_circuit else {
        return Err(CliError::invalid(
            "ansatz_bench.ansatze",
            "the optimizer comparison needs adapt".into(),
        ));
    };
    let optimizers = optimizer_table(&sys, cfg, &circuit, fci, master)?;
    out.write_table("optimizers.csv", &optimizers)?;
    out.write_table("optimizer_summary.csv", &optimizer_summary(&optimizers))?;
    Ok(())
}

/// Root-mean-square final error per optimizer and objective.
pub fn optimizer_summary(t: &Table) -> Table {
    let opt = t.strings("optimizer");
    let obj = t.strings("objective");
    let err = t.numbers("error");
    let mut keys: Vec<(String, String)> = Vec::new();
    for i in 0..opt.len() {
        let k = (opt[i].clone(), obj[i].clone());
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    let mut out = Table::new(&["optimizer", "objective", "runs", "rmsd"]);
    for (o, b) in keys {
        let e: Vec<f64> = (0..opt.len())
            .filter(|&i| opt[i] == o && obj[i] == b)
            .map(|i| err[i])
            .collect();
        let rmsd = (e.iter().map(|x| x * x).sum::<f64>() / e.len() as f64).sqrt();
        out.push(vec![o, b, e.len().to_string(), fmt_sci(rmsd)]);
    }
    out
}

fn optimizer_table(
    sys: &System,
    cfg: &Config,
    circuit: &AnsatzCircuit,
    fci: f64,
    master: u64,
) -> Result<Table> {
    let methods = cfg
        .list("ansatz_bench.optimizers")
        .iter()
        .map(|m| Method::parse(m))
        .collect::<qsceom::Result<Vec<_>>>()?;
    let shots = cfg.u64("ansatz_bench.sampled_shots")?;
    let sampled_cap = cfg.usize("ansatz_bench.sampled_max_evaluations")?;
    let exact_cap = cfg.usize("ansatz.max_evaluations")?;
    let repeats = cfg.usize("run.repeats")?;
    let grouping = group_pauli_terms(&sys.h)?;
    let mut start = circuit.clone();
    perturb_parameters(
        &mut start,
        cfg.f64("ansatz.perturbation")?,
        derive_seed(master, 999),
    );
    let start = start.params;

    let mut jobs = Vec::new();
    for &m in &methods {
        jobs.push((m, "exact", 0usize));
        for r in 0..repeats {
            jobs.push((m, "sampled", r));
        }
    }
    let rows = jobs
        .par_iter()
        .map(|&(method, objective, r)| {
            let exact = qsceom::ansatz::EnergyObjective {
                circuit,
                hamiltonian: &sys.sparse,
            };
            let res = if objective == "exact" {
                let opts = OptimizeOptions {
                    max_evaluations: exact_cap,
                    ..OptimizeOptions::with_method(method)
                };
                optimize(&exact, &start, &opts)
            } else {
                let seed = derive_seed(master, 1000 + r as u64);
                let obj = SampledEnergy {
                    circuit,
                    grouping: &grouping,
                    shots,
                    seed,
                    calls: Cell::new(0),
                };
                let opts = OptimizeOptions {
                    max_evaluations: sampled_cap,
                    ..OptimizeOptions::with_method(method)
                };
                optimize(&obj, &start, &opts)
            };
            let e = exact.value(&res.x);
            vec![
                method.name().to_string(),
                objective.to_string(),
                r.to_string(),
                res.evaluations.to_string(),
                fmt(e),
                fmt_sci(e - fci),
            ]
        })
        .collect::<Vec<_>>();
    let mut t = Table::new(&[
        "optimizer",
        "objective",
        "repeat",
        "evaluations",
        "final_exact_energy",
        "error",
    ]);
    for row in rows {
        t.push(row);
    }
    Ok(t)
}

/// Error per ansatz on a log axis with the chemical-accuracy line.
pub fn plot(table: &Table) -> Plot {
    let names = table.strings("ansatz");
    let errors = table.numbers("error");
    let series = names
        .iter()
        .zip(&errors)
        .enumerate()
        .map(|(k, (n, e))| Series {
            label: n.clone(),
            points: vec![(k as f64, e.abs())],
            style: Style::Markers,
        })
        .collect();
    Plot {
        title: "Ansatz error vs FCI".into(),
        x_label: "ansatz".into(),
        y_label: "|E - E_FCI| (Ha)".into(),
        log_y: true,
        series,
        hlines: vec![(CHEMICAL_ACCURACY, "chemical accuracy".into())],
        x_categories: Some(names),
        ..Default::default()
    }
}

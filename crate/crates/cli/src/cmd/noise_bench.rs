//! Root errors under shot, readout and gate noise, per mitigation stack and shot allocation.

use qsceom::ansatz::{AnsatzCircuit, AnsatzKind};
use qsceom::derive_seed;
use qsceom::mitigation::MitigationConfig;
use qsceom::simulator::NoiseModel;
use rayon::prelude::*;

use crate::config::Config;
use crate::error::{CliError, Result};
use crate::output::{fmt_sci, RunDir, Table};
use crate::plot::{Plot, Series, Style};
use crate::run::{
    fci_energies, ground_state, load_system, require_files, run_eom, Allocation, EomSettings,
    SchemeKind, System,
};

struct Prepared {
    sys: System,
    ground: AnsatzCircuit,
    fci: Vec<f64>,
    seed: u64,
}

#[derive(Clone)]
struct Job {
    fixture: usize,
    configuration: String,
    mitigation: String,
    allocation: Allocation,
    budget: u64,
    repeat: usize,
    noise: NoiseModel,
}

fn noise_for(cfg: &Config, configuration: &str) -> Result<NoiseModel> {
    let readout = cfg.f64("noise_bench.readout")?;
    let (d1, d2) = (
        cfg.f64("noise_bench.depol_1q")?,
        cfg.f64("noise_bench.depol_2q")?,
    );
    let model = match configuration {
        "exact" | "shots" => NoiseModel::noiseless(),
        "shots+readout" => NoiseModel::readout(readout),
        "shots+readout+depol" => NoiseModel {
            depol_1q: d1,
            depol_2q: d2,
            readout_eps: vec![readout],
        },
        other => {
            return Err(CliError::invalid(
                "noise_bench.configurations",
                format!("unknown configuration '{other}'"),
            ))
        }
    };
    Ok(model)
}

/// Absolute error per root, vs FCI, for one job.
fn errors(p: &Prepared, base: &EomSettings, job: &Job) -> Result<Vec<f64>> {
    let mut s = base.clone();
    s.scheme = SchemeKind::Pauli;
    s.davidson = false;
    s.budget = if job.configuration == "exact" {
        0
    } else {
        job.budget
    };
    s.allocation = job.allocation;
    s.noise = job.noise.clone();
    s.mitigation = MitigationConfig::parse(&job.mitigation)?;
    // Paired seeds: the same repeat index sees the same seed in every configuration.
    let run = run_eom(
        &p.sys,
        &p.ground,
        &s,
        derive_seed(p.seed, job.repeat as u64),
    )?;
    Ok(run
        .roots
        .iter()
        .zip(&p.fci)
        .map(|(e, f)| (e - f).abs())
        .collect())
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = if v.len() > 1 {
        v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (m, var.sqrt())
}

pub fn run(cfg: &Config) -> Result<()> {
    let fixtures = cfg.paths("noise_bench.fixtures")?;
    require_files(&fixtures)?;
    let master = cfg.u64("run.seed")?;
    let repeats = cfg.usize("run.repeats")?;
    let base = EomSettings::from_config(cfg)?;
    let out = RunDir::create(cfg, "noise-bench")?;

    let prepared = fixtures
        .par_iter()
        .enumerate()
        .map(|(k, path)| -> Result<Prepared> {
            let seed = derive_seed(master, k as u64);
            let sys = load_system(path, cfg)?;
            let (ground, _) = ground_state(&sys, cfg, AnsatzKind::Adapt, seed)?;
            let n = base.roots.min(
                qsceom::eom::EomBasis::singles_doubles(sys.ints.n_qubits(), sys.ints.n_electrons)?
                    .len(),
            );
            let fci = fci_energies(&sys, n)?;
            Ok(Prepared {
                sys,
                ground,
                fci,
                seed,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let budgets: Vec<u64> = cfg
        .list("noise_bench.budgets")
        .iter()
        .map(|b| {
            b.parse().map_err(|_| {
                CliError::invalid("noise_bench.budgets", format!("cannot parse '{b}'"))
            })
        })
        .collect::<Result<_>>()?;
    let allocations = cfg
        .list("noise_bench.allocations")
        .iter()
        .map(|a| Allocation::parse(a))
        .collect::<Result<Vec<_>>>()?;
    let mut jobs = Vec::new();
    for fixture in 0..prepared.len() {
        for configuration in cfg.list("noise_bench.configurations") {
            let noise = noise_for(cfg, &configuration)?;
            let exact = configuration == "exact";
            let mitigations = if exact {
                vec!["none".to_string()]
            } else {
                cfg.list("noise_bench.mitigations")
            };
            let allocs = if exact {
                vec![Allocation::Uniform]
            } else {
                allocations.clone()
            };
            let buds = if exact { vec![0] } else { budgets.clone() };
            for mitigation in &mitigations {
                for &allocation in &allocs {
                    for &budget in &buds {
                        for repeat in 0..repeats {
                            jobs.push(Job {
                                fixture,
                                configuration: configuration.clone(),
                                mitigation: mitigation.clone(),
                                allocation,
                                budget,
                                repeat,
                                noise: noise.clone(),
                            });
                        }
                    }
                }
            }
        }
    }
    let results = jobs
        .par_iter()
        .map(|j| errors(&prepared[j.fixture], &base, j))
        .collect::<Result<Vec<_>>>()?;

    let mut runs = Table::new(&[
        "system",
        "configuration",
        "mitigation",
        "allocation",
        "budget",
        "repeat",
        "root",
        "abs_error",
    ]);
    let mut summary = Table::new(&[
        "system",
        "configuration",
        "mitigation",
        "allocation",
        "budget",
        "root",
        "mean_abs_error",
        "std_abs_error",
        "runs",
    ]);
    for (chunk_jobs, chunk_errs) in jobs.chunks(repeats).zip(results.chunks(repeats)) {
        let j = &chunk_jobs[0];
        let name = &prepared[j.fixture].sys.name;
        let head = |v: &mut Vec<String>| {
            v.extend([
                name.clone(),
                j.configuration.clone(),
                j.mitigation.clone(),
                j.allocation.name().into(),
                j.budget.to_string(),
            ]);
        };
        for (job, errs) in chunk_jobs.iter().zip(chunk_errs) {
            for (r, e) in errs.iter().enumerate() {
                let mut row = Vec::new();
                head(&mut row);
                row.extend([job.repeat.to_string(), r.to_string(), fmt_sci(*e)]);
                runs.push(row);
            }
        }
        for r in 0..chunk_errs[0].len() {
            let v: Vec<f64> = chunk_errs.iter().map(|e| e[r]).collect();
            let (m, s) = mean_std(&v);
            let mut row = Vec::new();
            head(&mut row);
            row.extend([r.to_string(), fmt_sci(m), fmt_sci(s), v.len().to_string()]);
            summary.push(row);
        }
    }
    out.write_table("noise_bench_runs.csv", &runs)?;
    out.write_table("noise_bench.csv", &summary)?;
    out.write_text("noise_bench.svg", &summary_plot(&summary).render())?;

    let sweep = depol_sweep(cfg, &prepared, &base, budgets[0], repeats)?;
    out.write_table("depol_sweep.csv", &sweep)?;
    out.write_text("depol_sweep.svg", &sweep_plot(&sweep).render())?;
    Ok(())
}

/// Mean root error vs two-qubit depolarizing rate; one-qubit rate is a tenth of it.
fn depol_sweep(
    cfg: &Config,
    prepared: &[Prepared],
    base: &EomSettings,
    budget: u64,
    repeats: usize,
) -> Result<Table> {
    let rates = cfg.f64_list("noise_bench.depol_sweep")?;
    let mut jobs = Vec::new();
    for fixture in 0..prepared.len() {
        for &p in &rates {
            for repeat in 0..repeats {
                jobs.push((
                    p,
                    Job {
                        fixture,
                        configuration: "shots+depol".into(),
                        mitigation: "none".into(),
                        allocation: Allocation::Uniform,
                        budget,
                        repeat,
                        noise: NoiseModel {
                            depol_1q: p / 10.0,
                            depol_2q: p,
                            readout_eps: Vec::new(),
                        },
                    },
                ));
            }
        }
    }
    let results = jobs
        .par_iter()
        .map(|(_, j)| errors(&prepared[j.fixture], base, j))
        .collect::<Result<Vec<_>>>()?;
    let mut t = Table::new(&[
        "system",
        "depol_2q",
        "budget",
        "mean_abs_error",
        "std_abs_error",
        "runs",
    ]);
    for (cj, ce) in jobs.chunks(repeats).zip(results.chunks(repeats)) {
        let (p, j) = &cj[0];
        let per_run: Vec<f64> = ce
            .iter()
            .map(|e| e.iter().sum::<f64>() / e.len() as f64)
            .collect();
        let (m, s) = mean_std(&per_run);
        t.push(vec![
            prepared[j.fixture].sys.name.clone(),
            fmt_sci(*p),
            budget.to_string(),
            fmt_sci(m),
            fmt_sci(s),
            per_run.len().to_string(),
        ]);
    }
    Ok(t)
}

/// Uniform-allocation mean error per root for each configuration and mitigation at the first budget.
pub fn summary_plot(t: &Table) -> Plot {
    let systems = t.strings("system");
    let conf = t.strings("configuration");
    let mit = t.strings("mitigation");
    let alloc = t.strings("allocation");
    let budget = t.strings("budget");
    let root = t.numbers("root");
    let err = t.numbers("mean_abs_error");
    let first_budget = budget
        .iter()
        .find(|b| *b != "0")
        .cloned()
        .unwrap_or_default();
    let keep: Vec<usize> = (0..root.len())
        .filter(|&i| alloc[i] == "uniform" && (budget[i] == first_budget || budget[i] == "0"))
        .collect();
    let mut cats: Vec<String> = Vec::new();
    let mut names: Vec<String> = Vec::new();
    for &i in &keep {
        let c = format!("{}/{}", conf[i], mit[i]);
        if !cats.contains(&c) {
            cats.push(c);
        }
        let n = format!("{} root {}", systems[i], root[i]);
        if !names.contains(&n) {
            names.push(n);
        }
    }
    let series = names
        .iter()
        .map(|n| Series {
            label: n.clone(),
            points: keep
                .iter()
                .filter(|&&i| format!("{} root {}", systems[i], root[i]) == *n)
                .map(|&i| {
                    (
                        cats.iter()
                            .position(|c| *c == format!("{}/{}", conf[i], mit[i]))
                            .unwrap() as f64,
                        err[i],
                    )
                })
                .collect(),
            style: Style::Markers,
        })
        .collect();
    Plot {
        title: format!("Mean root error, uniform allocation, budget {first_budget}"),
        x_label: "configuration / mitigation".into(),
        y_label: "mean |E - E_FCI| (Ha)".into(),
        log_y: true,
        series,
        hlines: vec![(1.59e-3, "chemical accuracy".into())],
        x_categories: Some(cats),
        ..Default::default()
    }
}

pub fn sweep_plot(t: &Table) -> Plot {
    let systems = t.strings("system");
    let p = t.numbers("depol_2q");
    let m = t.numbers("mean_abs_error");
    let mut names: Vec<String> = Vec::new();
    for s in &systems {
        if !names.contains(s) {
            names.push(s.clone());
        }
    }
    let series = names
        .iter()
        .map(|n| Series {
            label: n.clone(),
            points: (0..p.len())
                .filter(|&i| systems[i] == *n)
                .map(|i| (p[i], m[i]))
                .collect(),
            style: Style::LineMarkers,
        })
        .collect();
    Plot {
        title: "Mean root error vs depolarizing rate".into(),
        x_label: "depol_2q".into(),
        y_label: "mean |E - E_FCI| (Ha)".into(),
        log_y: true,
        series,
        ..Default::default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_sample_std() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 1.0).abs() < 1e-12);
        assert_eq!(mean_std(&[4.0]).1, 0.0);
    }
}

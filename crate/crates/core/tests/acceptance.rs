//! Acceptance criteria 1 to 12. Runs as a plain binary so every criterion
//! prints its own PASS/FAIL line; exits non-zero if any criterion fails.
//! Positional arguments select criteria by number (e.g. `-- 1 7`).

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::sync::Mutex;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qsceom::ansatz::{
    adapt_vqe, default_method_for, hea_ansatz, optimize_circuit, uccsd_ansatz, AdaptConfig,
    AnsatzCircuit, OptimizeOptions,
};
use qsceom::chem::{
    parse_fcidump, parse_spectrum_csv, restrict_active, ActiveSpace, MolecularIntegrals,
};
use qsceom::derive_seed;
use qsceom::eom::{
    build_m_adaptive, build_m_exact, build_m_sampled, davidson_solve, diagonalize, eom_settings,
    matrix_from_oracle, AdaptiveOptions, DavidsonOptions, EomBasis, EomOracle, MeasurementScheme,
    SampledBuild, SamplingConfig, Shots,
};
use qsceom::linalg::{linear_fit, log_log_slope};
use qsceom::measurement::{
    allocate_shots_adaptive, allocate_shots_uniform, brg_factorize, budget_accounting,
    group_pauli_terms, pilot_plan,
};
use qsceom::mitigation::{
    m3_correct, mitigation_stack, AssignmentModel, MitigationConfig, SymmetrySector,
};
use qsceom::operators::{build_excitation_pool, build_hamiltonian, PauliSum};
use qsceom::simulator::{
    apply_readout_noise, exact_distribution, hartree_fock_state, sample_counts, NoiseModel,
    QuasiDistribution, SparseOperator, Statevector,
};

const CHEMICAL_ACCURACY: f64 = 1.59e-3;

/// Ledger checks from every brute-force sampled build, consumed by criterion 12.
static LEDGER_CHECKS: Mutex<Vec<(String, u64, u64)>> = Mutex::new(Vec::new());

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn fixture_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(rel)
}

fn load(rel: &str) -> MolecularIntegrals {
    parse_fcidump(&std::fs::read_to_string(fixture_path(rel)).unwrap()).unwrap()
}

fn reference(rel: &str) -> Vec<f64> {
    parse_spectrum_csv(&std::fs::read_to_string(fixture_path(rel)).unwrap()).unwrap()
}

struct System {
    ints: MolecularIntegrals,
    h: PauliSum,
    sparse: SparseOperator,
    ground: AnsatzCircuit,
    basis: EomBasis,
}

fn system(ints: MolecularIntegrals) -> System {
    let h = build_hamiltonian(&ints).unwrap();
    let sparse = SparseOperator::from_pauli_sum(&h);
    let (nq, ne) = (ints.n_qubits(), ints.n_electrons);
    let pool = build_excitation_pool(ne, nq - ne);
    let adapt = adapt_vqe(
        &h,
        &pool,
        &AdaptConfig::default(),
        &hartree_fock_state(nq, ne),
    )
    .unwrap();
    let basis = EomBasis::singles_doubles(nq, ne).unwrap();
    System {
        ints,
        h,
        sparse,
        ground: adapt.circuit,
        basis,
    }
}

fn exact_roots(s: &System) -> Vec<f64> {
    diagonalize(&build_m_exact(&s.ground, &s.sparse, &s.basis, 0.0).unwrap()).total_energies
}

fn roots(b: &SampledBuild) -> Vec<f64> {
    diagonalize(&b.matrix).total_energies
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn sample_var(v: &[f64]) -> f64 {
    let m = mean(v);
    v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64
}

/// Uniform build with `per_setting` shots on every setting; the ledger is
/// recorded for the cost identity check.
fn uniform_build(
    s: &System,
    scheme: &MeasurementScheme,
    per_setting: u64,
    cfg: &SamplingConfig,
    tag: &str,
) -> SampledBuild {
    let u = scheme.n_groups() as u64;
    let n_m = (s.basis.len() * s.basis.len()) as u64;
    let settings = eom_settings(s.basis.len(), scheme.n_groups());
    let budget = budget_accounting(u, per_setting, n_m);
    let plan = allocate_shots_uniform(&settings, budget, 0).unwrap();
    let b = build_m_sampled(&s.ground, &s.basis, scheme, &Shots::Plan(plan), cfg).unwrap();
    LEDGER_CHECKS.lock().unwrap().push((
        format!("{tag} u={u} n={per_setting} n_m={n_m}"),
        b.ledger.shots_consumed,
        budget,
    ));
    b
}

fn h2() -> System {
    system(load("h2/h2_sto3g_0.740.fcidump"))
}

fn c1() -> Outcome {
    let start = Instant::now();
    let s = h2();
    let eom = exact_roots(&s);
    let secs = start.elapsed().as_secs_f64();
    let fci = reference("reference/h2/h2_sto3g_0.740.csv");
    let err = max_abs_diff(&eom, &fci[..4]);
    outcome(
        eom.len() == 4 && err < 1e-8 && secs < 1.0,
        format!(
            "{} roots, max |E - FCI| = {err:.2e} Ha, {secs:.3} s",
            eom.len()
        ),
    )
}

fn c2() -> Outcome {
    let n = build_excitation_pool(6, 6).len();
    outcome(n == 117, format!("{n} generators"))
}

fn c3() -> Outcome {
    let ints = load("h4/h4_sto6g_3.000.fcidump");
    let fci = reference("reference/h4/h4_sto6g_3.000.csv")[0];
    let s = system(ints);
    let (nq, ne) = (s.ints.n_qubits(), s.ints.n_electrons);
    let adapt_err = s.sparse.expectation(&s.ground.state()).unwrap() - fci;

    let pool = build_excitation_pool(ne, nq - ne);
    let mut uccsd = uccsd_ansatz(&pool, nq, ne);
    let uccsd_opts = OptimizeOptions::with_method(default_method_for(&uccsd));
    let uccsd_err = optimize_circuit(&mut uccsd, &s.sparse, &uccsd_opts).value - fci;

    let mut hea = hea_ansatz(nq, 4, ne, 0).unwrap();
    let hea_opts = OptimizeOptions::with_method(default_method_for(&hea));
    let hea_err = optimize_circuit(&mut hea, &s.sparse, &hea_opts).value - fci;

    let pass = adapt_err < CHEMICAL_ACCURACY
        && uccsd_err >= CHEMICAL_ACCURACY
        && hea_err >= CHEMICAL_ACCURACY;
    outcome(
        pass,
        format!("ADAPT {adapt_err:.3e}, UCCSD {uccsd_err:.3e}, HEA(4) {hea_err:.3e} Ha vs 1.59e-3"),
    )
}

fn c4() -> Outcome {
    let s = h2();
    let exact = exact_roots(&s);
    let scheme = MeasurementScheme::pauli(&s.h).unwrap();
    let levels = [100u64, 1_000, 10_000];
    let mut rms = Vec::new();
    for (l, &n) in levels.iter().enumerate() {
        let mut sq = Vec::new();
        for seed in 0..20 {
            let cfg = SamplingConfig {
                seed: derive_seed(4_000 + l as u64, seed),
                ..Default::default()
            };
            let b = uniform_build(&s, &scheme, n, &cfg, "c4");
            sq.extend(roots(&b).iter().zip(&exact).map(|(a, e)| (a - e).powi(2)));
        }
        rms.push(mean(&sq).sqrt());
    }
    let x: Vec<f64> = levels.iter().map(|&v| v as f64).collect();
    let slope = log_log_slope(&x, &rms);
    outcome(
        (slope + 0.5).abs() <= 0.15,
        format!(
            "RMS {:.2e} / {:.2e} / {:.2e} Ha, slope {slope:.3}",
            rms[0], rms[1], rms[2]
        ),
    )
}

fn c5() -> Outcome {
    let s = h2();
    let exact = exact_roots(&s);
    let scheme = MeasurementScheme::pauli(&s.h).unwrap();
    let settings = eom_settings(s.basis.len(), scheme.n_groups()).len() as u64;
    let per_setting = 500_000 / settings;
    let mut per_root = vec![0.0; exact.len()];
    for run in 0..5 {
        let cfg = SamplingConfig {
            seed: derive_seed(5_000, run),
            ..Default::default()
        };
        let b = uniform_build(&s, &scheme, per_setting, &cfg, "c5");
        assert_eq!(b.ledger.shots_consumed, 500_000);
        for (k, (a, e)) in roots(&b).iter().zip(&exact).enumerate() {
            per_root[k] += (a - e).abs() / 5.0;
        }
    }
    let overall = mean(&per_root);
    let listing: Vec<String> = per_root.iter().map(|e| format!("{e:.2e}")).collect();
    outcome(
        overall <= 5e-3,
        format!(
            "mean error {overall:.2e} Ha, per root [{}]",
            listing.join(", ")
        ),
    )
}

fn c6() -> Outcome {
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for atoms in [2, 4, 6] {
        let s = system(load(&format!("hchain/h{atoms}_sto3g_1.500.fcidump")));
        let exact = exact_roots(&s);
        let scheme = MeasurementScheme::brg(&s.ints, 1e-4).unwrap();
        let b = build_m_sampled(
            &s.ground,
            &s.basis,
            &scheme,
            &Shots::Exact,
            &SamplingConfig::default(),
        )
        .unwrap();
        let err = max_abs_diff(&roots(&b), &exact);
        worst = worst.max(err);
        parts.push(format!("H{atoms} {err:.2e} ({} groups)", scheme.n_groups()));
    }
    outcome(worst < 1e-6, format!("max root error {}", parts.join(", ")))
}

fn c7() -> Outcome {
    let atoms = [2usize, 4, 6, 8, 10, 12];
    let counts = |tol: f64| -> Vec<f64> {
        atoms
            .iter()
            .map(|n| {
                let ints = load(&format!("hchain/h{n}_sto3g_1.500.fcidump"));
                brg_factorize(&ints, tol).unwrap().group_count() as f64
            })
            .collect()
    };
    let loose = counts(1e-4);
    let tight = counts(1e-6);
    let x: Vec<f64> = atoms.iter().map(|&n| n as f64).collect();
    let (_, _, r2_loose) = linear_fit(&x, &loose);
    let (_, _, r2_tight) = linear_fit(&x, &tight);
    let dominated = tight.iter().zip(&loose).all(|(t, l)| t >= l);
    let gap = tight[5] - loose[5];
    let pass = r2_loose > 0.99 && r2_tight > 0.99 && dominated && (5.0..=15.0).contains(&gap);
    outcome(
        pass,
        format!("1e-4 {loose:?} R2 {r2_loose:.4}; 1e-6 {tight:?} R2 {r2_tight:.4}; H12 gap {gap}"),
    )
}

fn c8() -> Outcome {
    let full = load("nh3/nh3_sto3g_1.000.fcidump");
    let space = ActiveSpace::around_fermi_level(&full, 6, 6).unwrap();
    let s = system(restrict_active(&full, &space).unwrap());
    let oracle = EomOracle::new(&s.ground, &s.sparse, &s.basis, 0.0).unwrap();
    let n_m = oracle.dim();
    let diag = oracle.diagonal();
    let opts = DavidsonOptions {
        n_roots: 3,
        ..Default::default()
    };
    let dav = davidson_solve(&|i, j| oracle.element(i, j), &diag, &opts).unwrap();
    let dense = diagonalize(&matrix_from_oracle(&oracle)).total_energies;
    let err = max_abs_diff(&dav.solution.total_energies, &dense[..3]);
    let frac = dav.ledger.elements_evaluated as f64 / (n_m * n_m) as f64;
    outcome(
        dav.converged && err < 1e-8 && frac < 0.5,
        format!(
            "n_m {n_m}, max root diff {err:.2e} Ha, {} elements = {:.1}% of n_m^2, {} iterations",
            dav.ledger.elements_evaluated,
            100.0 * frac,
            dav.iterations
        ),
    )
}

/// Dense tensor-product assignment matrix, built independently of the library.
fn dense_assignment(eps: &[f64]) -> DMatrix<f64> {
    let n = eps.len();
    let dim = 1usize << n;
    DMatrix::from_fn(dim, dim, |obs, tru| {
        (0..n)
            .map(|q| {
                if (obs >> q & 1) == (tru >> q & 1) {
                    1.0 - eps[q]
                } else {
                    eps[q]
                }
            })
            .product()
    })
}

fn random_state(n: usize, rng: &mut ChaCha8Rng) -> Statevector {
    let amps: Vec<Complex64> = (0..1 << n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let mut s = Statevector::from_amplitudes(n, amps).unwrap();
    s.normalize();
    s
}

fn c9() -> Outcome {
    // (a) M3 inversion against a dense channel.
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst_a = 0.0f64;
    for n in 1..=6 {
        for _ in 0..5 {
            let state = random_state(n, &mut rng);
            let eps: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..0.1)).collect();
            let clean = exact_distribution(&state, &vec![None; n]);
            let noisy = apply_readout_noise(&clean, &eps);
            let dense = dense_assignment(&eps) * nalgebra::DVector::from_vec(clean.clone());
            worst_a = worst_a.max(max_abs_diff(&noisy, dense.as_slice()));
            let fixed = m3_correct(
                &QuasiDistribution::from_dense(n, &noisy),
                &AssignmentModel::new(eps).unwrap(),
            )
            .unwrap()
            .to_dense();
            let weights: Vec<f64> = (0..1 << n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let want: f64 = clean.iter().zip(&weights).map(|(p, w)| p * w).sum();
            let got: f64 = fixed.iter().zip(&weights).map(|(p, w)| p * w).sum();
            worst_a = worst_a.max((want - got).abs());
        }
    }

    // (b) Noiseless number-conserving circuits keep every shot.
    let s4 = system(load("h4/h4_sto6g_3.000.fcidump"));
    let sector = SymmetrySector::new(s4.ints.n_alpha(), s4.ints.n_beta());
    let nq = s4.ints.n_qubits();
    let z = vec![None; nq];
    let states: Vec<Statevector> = (0..8)
        .map(|j| qsceom::eom::build_basis_state(&s4.ground, &s4.basis, j * 3).unwrap())
        .collect();
    let identity = AssignmentModel::new(vec![0.0; nq]).unwrap();
    let post = MitigationConfig {
        m3: false,
        postselect: true,
    };
    let mut min_retained = 1.0f64;
    for (k, st) in states.iter().enumerate() {
        let mut r = ChaCha8Rng::seed_from_u64(derive_seed(90, k as u64));
        let counts = sample_counts(st, &z, 2_000, &NoiseModel::noiseless(), &mut r);
        let m = mitigation_stack(&counts.to_quasi(), post, &identity, Some(sector), true).unwrap();
        min_retained = min_retained.min(m.retained_fraction);
    }

    // (c) Postselection under 2% readout flips, paired seeds.
    let grouping = group_pauli_terms(&s4.h).unwrap();
    let zgroup = grouping
        .groups
        .iter()
        .find(|g| g.is_z_only())
        .expect("a Z-only group");
    let noise = NoiseModel::readout(0.02);
    let model = AssignmentModel::from_noise(&noise, nq).unwrap();
    let value = |d: &QuasiDistribution| {
        d.probs
            .iter()
            .map(|(&b, &p)| p * zgroup.value(b))
            .sum::<f64>()
            / d.total()
    };
    let exact: Vec<f64> = states
        .iter()
        .map(|st| {
            value(&QuasiDistribution::from_dense(
                nq,
                &exact_distribution(st, &z),
            ))
        })
        .collect();
    let mut wins = 0;
    for seed in 0..20 {
        let (mut raw_err, mut post_err) = (0.0, 0.0);
        for (k, st) in states.iter().enumerate() {
            let mut r = ChaCha8Rng::seed_from_u64(derive_seed(900 + seed, k as u64));
            let q = sample_counts(st, &z, 4_000, &noise, &mut r).to_quasi();
            let m = mitigation_stack(&q, post, &model, Some(sector), true).unwrap();
            raw_err += (value(&q) - exact[k]).abs();
            post_err += (value(&m.dist) - exact[k]).abs();
        }
        if post_err < raw_err {
            wins += 1;
        }
    }
    let pass = worst_a < 1e-10 && min_retained == 1.0 && wins >= 14;
    outcome(
        pass,
        format!("(a) max deviation {worst_a:.1e}; (b) min retained {min_retained}; (c) postselect better in {wins}/20"),
    )
}

fn c10() -> Outcome {
    let s = h2();
    let exact = exact_roots(&s);
    let scheme = MeasurementScheme::pauli(&s.h).unwrap();
    let settings = eom_settings(s.basis.len(), scheme.n_groups());

    // Conservation in every allocation mode.
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut conserved = true;
    for budget in [1_000u64, 8_001, 40_000, 123_457, 500_000] {
        let u = allocate_shots_uniform(&settings, budget, 0).unwrap();
        let p = pilot_plan(&settings, budget, 0.1, 10).unwrap();
        let v: Vec<f64> = settings.iter().map(|_| rng.gen_range(0.0..2.0)).collect();
        let a = allocate_shots_adaptive(&settings, &v, budget, p.total(), 0).unwrap();
        conserved &= u.total() == budget && p.total() + a.total() == budget;
    }
    let opts = AdaptiveOptions::default();
    let budget = 40_000;
    let probe = build_m_adaptive(
        &s.ground,
        &s.basis,
        &scheme,
        budget,
        &opts,
        &SamplingConfig::default(),
    )
    .unwrap();
    conserved &= probe.ledger.shots_consumed == budget;

    // Root-0 variance over repeated builds, paired by seed.
    let reps = 8;
    let mut wins = 0;
    for seed in 0..50u64 {
        let (mut uni, mut ada) = (Vec::new(), Vec::new());
        for r in 0..reps {
            let cfg = SamplingConfig {
                seed: derive_seed(10_000 + seed, r),
                ..Default::default()
            };
            let plan = allocate_shots_uniform(&settings, budget, 0).unwrap();
            let bu =
                build_m_sampled(&s.ground, &s.basis, &scheme, &Shots::Plan(plan), &cfg).unwrap();
            conserved &= bu.ledger.shots_consumed == budget;
            let ba = build_m_adaptive(&s.ground, &s.basis, &scheme, budget, &opts, &cfg).unwrap();
            conserved &= ba.ledger.shots_consumed == budget;
            uni.push(roots(&bu)[0] - exact[0]);
            ada.push(roots(&ba)[0] - exact[0]);
        }
        if sample_var(&ada) <= sample_var(&uni) {
            wins += 1;
        }
    }
    outcome(
        conserved && wins >= 30,
        format!("budgets conserved: {conserved}; adaptive <= uniform in {wins}/50 seeds"),
    )
}

fn c11() -> Outcome {
    let s = h2();
    let exact = exact_roots(&s);
    let scheme = MeasurementScheme::pauli(&s.h).unwrap();
    let seeds = 8u64;
    let per_setting = 2_000;
    let errors = |noise: &NoiseModel, mitigation: MitigationConfig, seed: u64| -> Vec<f64> {
        let cfg = SamplingConfig {
            noise: noise.clone(),
            mitigation,
            shift: 0.0,
            seed: derive_seed(11_000, seed),
        };
        let b = uniform_build(&s, &scheme, per_setting, &cfg, "c11");
        roots(&b)
            .iter()
            .zip(&exact)
            .map(|(a, e)| (a - e).abs())
            .collect()
    };

    let rates = [0.0, 1e-3, 1e-2];
    let mut means = Vec::new();
    for &p in &rates {
        let noise = NoiseModel {
            depol_1q: p / 10.0,
            depol_2q: p,
            readout_eps: Vec::new(),
        };
        let all: Vec<f64> = (0..seeds)
            .flat_map(|seed| errors(&noise, MitigationConfig::NONE, seed))
            .collect();
        means.push(mean(&all));
    }
    let monotone = means.windows(2).all(|w| w[1] >= w[0]);

    let noise = NoiseModel {
        depol_1q: 1e-3,
        depol_2q: 1e-2,
        readout_eps: vec![0.02],
    };
    let n_roots = exact.len();
    let mut delta = vec![0.0; n_roots];
    for seed in 0..seeds {
        let raw = errors(&noise, MitigationConfig::NONE, seed);
        let mit = errors(&noise, MitigationConfig::FULL, seed);
        for k in 0..n_roots {
            delta[k] += (raw[k] - mit[k]) / seeds as f64;
        }
    }
    let improves = delta.iter().any(|d| *d > 0.0);
    let mixed = delta.iter().any(|d| *d > 0.0) && delta.iter().any(|d| *d < 0.0);
    let listing: Vec<String> = delta.iter().map(|d| format!("{d:+.2e}")).collect();
    outcome(
        monotone && improves && mixed,
        format!(
            "mean root error {:.2e} / {:.2e} / {:.2e} Ha; mitigation gain per root [{}]",
            means[0],
            means[1],
            means[2],
            listing.join(", ")
        ),
    )
}

fn c12() -> Outcome {
    let s = h2();
    let schemes = [
        MeasurementScheme::pauli(&s.h).unwrap(),
        MeasurementScheme::brg(&s.ints, 1e-6).unwrap(),
    ];
    for scheme in &schemes {
        for n in [1u64, 37, 500] {
            uniform_build(
                &s,
                scheme,
                n,
                &SamplingConfig {
                    seed: n,
                    ..Default::default()
                },
                scheme.name(),
            );
        }
    }
    let full = load("h2o/h2o_sto3g_0.940.fcidump");
    let h2o = system(
        restrict_active(
            &full,
            &ActiveSpace::around_fermi_level(&full, 2, 2).unwrap(),
        )
        .unwrap(),
    );
    let scheme = MeasurementScheme::pauli(&h2o.h).unwrap();
    uniform_build(&h2o, &scheme, 10, &SamplingConfig::default(), "h2o");
    let checks = LEDGER_CHECKS.lock().unwrap();
    let bad: Vec<&(String, u64, u64)> =
        checks.iter().filter(|(_, got, want)| got != want).collect();
    outcome(
        bad.is_empty(),
        format!(
            "{} brute-force runs checked, {} mismatches{}",
            checks.len(),
            bad.len(),
            {
                bad.first()
                    .map(|b| format!(" (first: {} got {} want {})", b.0, b.1, b.2))
                    .unwrap_or_default()
            }
        ),
    )
}

fn main() {
    let criteria: [(usize, fn() -> Outcome); 12] = [
        (1, c1),
        (2, c2),
        (3, c3),
        (4, c4),
        (5, c5),
        (6, c6),
        (7, c7),
        (8, c8),
        (9, c9),
        (10, c10),
        (11, c11),
        (12, c12),
    ];
    let selected: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, f) in criteria {
        if !selected.is_empty() && !selected.contains(&k) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        let tag = if result.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {k:>2}: {tag}  {}  [{:.1} s]",
            result.detail,
            start.elapsed().as_secs_f64()
        );
        if !result.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

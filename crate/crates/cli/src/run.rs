//! Shared steps: loading a system, preparing a ground state, running q-sc-EOM.

use std::path::{Path, PathBuf};

use qsceom::ansatz::{
    adapt_vqe, default_method_for, hea_ansatz, lucj_ansatz, optimize_circuit,
    optimize_with_restarts, uccsd_ansatz, AdaptConfig, AnsatzCircuit, AnsatzKind, LucjConfig,
    Method, OptimizeOptions,
};
use qsceom::chem::{fci_solve, parse_fcidump, restrict_active, ActiveSpace, MolecularIntegrals};
use qsceom::eom::{
    brute_force_ledger, build_m_adaptive, build_m_exact, build_m_sampled, davidson_solve,
    diagonalize, eom_settings, AdaptiveOptions, CostLedger, DavidsonOptions, EomBasis, EomOracle,
    MeasurementScheme, SamplingConfig, Shots,
};
use qsceom::measurement::{allocate_shots_uniform, group_pauli_terms};
use qsceom::mitigation::MitigationConfig;
use qsceom::operators::{build_excitation_pool, build_hamiltonian, PauliSum};
use qsceom::simulator::{hartree_fock_state, NoiseModel, SparseOperator};

use crate::config::Config;
use crate::error::{CliError, Result};

pub struct System {
    pub name: String,
    /// Bond length parsed from the fixture name, if it carries one.
    pub distance: Option<f64>,
    pub ints: MolecularIntegrals,
    pub h: PauliSum,
    pub sparse: SparseOperator,
}

/// `h4_sto6g_3.000.fcidump` → 3.0
pub fn distance_from_name(path: &Path) -> Option<f64> {
    let stem = path.file_stem()?.to_str()?;
    stem.rsplit('_').next()?.parse().ok()
}

/// Integrals only, with the configured active space applied.
pub fn load_integrals(path: &Path, cfg: &Config) -> Result<MolecularIntegrals> {
    if !path.is_file() {
        return Err(CliError::MissingFixture(path.to_path_buf()));
    }
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut ints = parse_fcidump(&text)?;
    let (ne, no) = (
        cfg.usize("system.active_electrons")?,
        cfg.usize("system.active_orbitals")?,
    );
    if ne > 0 && no > 0 {
        let space = ActiveSpace::around_fermi_level(&ints, ne, no)?;
        ints = restrict_active(&ints, &space)?;
    }
    Ok(ints)
}

pub fn load_system(path: &Path, cfg: &Config) -> Result<System> {
    let ints = load_integrals(path, cfg)?;
    let h = build_hamiltonian(&ints)?;
    let sparse = SparseOperator::from_pauli_sum(&h);
    let name = path
        .file_stem()
        .map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    Ok(System {
        name,
        distance: distance_from_name(path),
        ints,
        h,
        sparse,
    })
}

/// Lowest `n` FCI energies (fewer if the sector is smaller).
pub fn fci_energies(sys: &System, n: usize) -> Result<Vec<f64>> {
    let first = fci_solve(&sys.ints, 1)?;
    let available = first.determinants.len();
    Ok(fci_solve(&sys.ints, n.min(available))?.energies)
}

fn optimizer_options(cfg: &Config, circuit: &AnsatzCircuit) -> Result<OptimizeOptions> {
    let method = match cfg.str("ansatz.optimizer") {
        "auto" => default_method_for(circuit),
        other => Method::parse(other)?,
    };
    Ok(OptimizeOptions {
        max_evaluations: cfg.usize("ansatz.max_evaluations")?,
        ..OptimizeOptions::with_method(method)
    })
}

/// Optimized ground-state circuit of the configured kind, and its energy.
pub fn ground_state(
    sys: &System,
    cfg: &Config,
    kind: AnsatzKind,
    seed: u64,
) -> Result<(AnsatzCircuit, f64)> {
    let (nq, ne) = (sys.ints.n_qubits(), sys.ints.n_electrons);
    let pool = build_excitation_pool(ne, nq - ne);
    let restarts = cfg.usize("ansatz.restarts")?;
    let scale = cfg.f64("ansatz.perturbation")?;
    let mut circuit = match kind {
        AnsatzKind::Adapt => {
            let probe = AnsatzCircuit::new(AnsatzKind::Adapt, nq, ne);
            let config = AdaptConfig {
                gradient_norm_threshold: cfg.f64("ansatz.gradient_threshold")?,
                max_operators: cfg.usize("ansatz.max_operators")?,
                optimizer: optimizer_options(cfg, &probe)?,
            };
            let result = adapt_vqe(&sys.h, &pool, &config, &hartree_fock_state(nq, ne))?;
            let e = result.energy();
            return Ok((result.circuit, e));
        }
        AnsatzKind::Uccsd => uccsd_ansatz(&pool, nq, ne),
        AnsatzKind::Hea => hea_ansatz(nq, cfg.usize("ansatz.layers")?, ne, seed)?,
        AnsatzKind::Lucj => lucj_ansatz(
            &LucjConfig::local(cfg.usize("ansatz.layers")?, sys.ints.n_spatial),
            ne,
            None,
        )?,
    };
    let opts = optimizer_options(cfg, &circuit)?;
    let result = if restarts > 1 || kind == AnsatzKind::Lucj {
        optimize_with_restarts(&mut circuit, &sys.sparse, &opts, restarts, scale, seed)
    } else {
        optimize_circuit(&mut circuit, &sys.sparse, &opts)
    };
    Ok((circuit, result.value))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    Exact,
    Pauli,
    Brg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Allocation {
    Uniform,
    Adaptive,
}

impl Allocation {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Self::Uniform),
            "adaptive" => Ok(Self::Adaptive),
            _ => Err(CliError::invalid(
                "shots.allocation",
                format!("unknown allocation '{s}'"),
            )),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Uniform => "uniform",
            Self::Adaptive => "adaptive",
        }
    }
}

/// Everything that decides how the subspace matrix is estimated.
#[derive(Debug, Clone, PartialEq)]
pub struct EomSettings {
    pub scheme: SchemeKind,
    pub brg_tolerance: f64,
    /// Total shots; 0 means exact outcome probabilities.
    pub budget: u64,
    pub allocation: Allocation,
    pub adaptive: AdaptiveOptions,
    pub noise: NoiseModel,
    pub mitigation: MitigationConfig,
    pub davidson: bool,
    pub davidson_tol: f64,
    pub roots: usize,
}

impl EomSettings {
    pub fn from_config(cfg: &Config) -> Result<Self> {
        let scheme = match cfg.str("measurement.scheme") {
            "exact" => SchemeKind::Exact,
            "pauli" => SchemeKind::Pauli,
            "brg" => SchemeKind::Brg,
            s => {
                return Err(CliError::invalid(
                    "measurement.scheme",
                    format!("unknown scheme '{s}'"),
                ))
            }
        };
        let davidson = match cfg.str("eom.solver") {
            "dense" => false,
            "davidson" => true,
            s => {
                return Err(CliError::invalid(
                    "eom.solver",
                    format!("unknown solver '{s}'"),
                ))
            }
        };
        if davidson && scheme != SchemeKind::Exact {
            return Err(CliError::invalid(
                "eom.solver",
                "davidson needs measurement.scheme=exact".into(),
            ));
        }
        let readout = cfg.f64("noise.readout")?;
        let noise = NoiseModel {
            depol_1q: cfg.f64("noise.depol_1q")?,
            depol_2q: cfg.f64("noise.depol_2q")?,
            readout_eps: if readout > 0.0 {
                vec![readout]
            } else {
                Vec::new()
            },
        };
        noise.validate()?;
        let floor = cfg.u64("shots.floor")?;
        Ok(Self {
            scheme,
            brg_tolerance: cfg.f64("measurement.brg_tolerance")?,
            budget: cfg.u64("shots.budget")?,
            allocation: Allocation::parse(cfg.str("shots.allocation"))?,
            adaptive: AdaptiveOptions {
                pilot_fraction: cfg.f64("shots.pilot_fraction")?,
                pilot_floor: floor,
                floor,
            },
            noise,
            mitigation: MitigationConfig::parse(cfg.str("mitigation.stack"))?,
            davidson,
            davidson_tol: cfg.f64("eom.davidson_tol")?,
            roots: cfg.usize("eom.roots")?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EomRun {
    pub roots: Vec<f64>,
    pub n_basis: usize,
    pub groups: usize,
    pub ledger: CostLedger,
    pub flagged: usize,
}

pub fn run_eom(sys: &System, ground: &AnsatzCircuit, s: &EomSettings, seed: u64) -> Result<EomRun> {
    let basis = EomBasis::singles_doubles(sys.ints.n_qubits(), sys.ints.n_electrons)?;
    let n = basis.len();
    let k = s.roots.min(n);
    let scheme = match s.scheme {
        SchemeKind::Exact => None,
        SchemeKind::Pauli => Some(MeasurementScheme::pauli(&sys.h)?),
        SchemeKind::Brg => Some(MeasurementScheme::brg(&sys.ints, s.brg_tolerance)?),
    };
    let Some(scheme) = scheme else {
        let groups = group_pauli_terms(&sys.h)?.len();
        if s.davidson {
            let oracle = EomOracle::new(ground, &sys.sparse, &basis, 0.0)?;
            let diag = oracle.diagonal();
            let opts = DavidsonOptions {
                n_roots: k,
                tol: s.davidson_tol,
                groups: groups as u64,
                ..Default::default()
            };
            let r = davidson_solve(&|i, j| oracle.element(i, j), &diag, &opts)?;
            return Ok(EomRun {
                roots: r.solution.total_energies,
                n_basis: n,
                groups,
                ledger: r.ledger,
                flagged: 0,
            });
        }
        let m = build_m_exact(ground, &sys.sparse, &basis, 0.0)?;
        let roots = diagonalize(&m).total_energies[..k].to_vec();
        return Ok(EomRun {
            roots,
            n_basis: n,
            groups,
            ledger: brute_force_ledger(n, groups as u64),
            flagged: 0,
        });
    };
    let cfg = SamplingConfig {
        noise: s.noise.clone(),
        mitigation: s.mitigation,
        shift: 0.0,
        seed,
    };
    let build = if s.budget == 0 {
        build_m_sampled(ground, &basis, &scheme, &Shots::Exact, &cfg)?
    } else {
        match s.allocation {
            Allocation::Uniform => {
                let settings = eom_settings(n, scheme.n_groups());
                let plan = allocate_shots_uniform(&settings, s.budget, 0)?;
                build_m_sampled(ground, &basis, &scheme, &Shots::Plan(plan), &cfg)?
            }
            Allocation::Adaptive => {
                build_m_adaptive(ground, &basis, &scheme, s.budget, &s.adaptive, &cfg)?
            }
        }
    };
    let roots = diagonalize(&build.matrix).total_energies[..k].to_vec();
    Ok(EomRun {
        roots,
        n_basis: n,
        groups: scheme.n_groups(),
        ledger: build.ledger,
        flagged: build.flagged.len(),
    })
}

pub fn require_files(paths: &[PathBuf]) -> Result<()> {
    match paths.iter().find(|p| !p.is_file()) {
        Some(p) => Err(CliError::MissingFixture(p.clone())),
        None => Ok(()),
    }
}

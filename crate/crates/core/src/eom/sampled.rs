//! Shot-sampled construction of the subspace matrix.
//!
//! Diagonal elements come from `U|Φ_I⟩`; off-diagonal ones from the two
//! superpositions `U(|Φ_I⟩ + |Φ_J⟩)/√2` and `U(|Φ_I⟩ + i|Φ_J⟩)/√2`:
//! `Re M_IJ = ⟨Ĥ⟩₊ − (M_II + M_JJ)/2` and `Im M_IJ = −(⟨Ĥ⟩ᵢ − (M_II + M_JJ)/2)`.
//! The superposition is formed on the determinants before `U` acts, which is
//! the same state a preparation circuit would produce.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::basis::EomBasis;
use super::matrix::{CostLedger, EomMatrix};
use crate::ansatz::{AnsatzCircuit, CircuitProgram, Element};
use crate::chem::MolecularIntegrals;
use crate::error::{Error, Result};
use crate::measurement::{
    allocate_shots_adaptive, brg_factorize, group_pauli_terms, pilot_plan, variance_proxy,
    BrgFactorization, Grouping, Phase, SettingId, ShotPlan,
};
use crate::mitigation::{mitigation_stack, AssignmentModel, MitigationConfig, SymmetrySector};
use crate::operators::PauliSum;
use crate::par;
use crate::simulator::orbital::{apply_decomposition, givens_decompose, GivensDecomposition};
use crate::simulator::{
    apply_readout_noise, exact_distribution, sample_counts, sample_noisy, BasisPattern,
    CountsHistogram, GateSite, NoiseModel, NoisyProgram, QuasiDistribution, Statevector,
};

/// How each prepared state is measured.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasurementScheme {
    /// Qubit-wise compatible Pauli groups.
    Pauli(Grouping),
    /// Basis-rotation groups: one-body plus one per retained rank.
    Brg(BrgFactorization),
}

impl MeasurementScheme {
    pub fn pauli(h: &PauliSum) -> Result<Self> {
        Ok(Self::Pauli(group_pauli_terms(h)?))
    }

    pub fn brg(ints: &MolecularIntegrals, tolerance: f64) -> Result<Self> {
        Ok(Self::Brg(brg_factorize(ints, tolerance)?))
    }

    pub fn n_groups(&self) -> usize {
        match self {
            Self::Pauli(g) => g.len(),
            Self::Brg(f) => f.group_count(),
        }
    }

    pub fn constant(&self) -> f64 {
        match self {
            Self::Pauli(g) => g.constant,
            Self::Brg(f) => f.core_energy,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Pauli(_) => "pauli",
            Self::Brg(_) => "brg",
        }
    }

    /// Measured entirely in the (possibly orbital-rotated) Z basis.
    fn z_diagonal(&self, group: usize) -> bool {
        match self {
            Self::Pauli(g) => g.groups[group].is_z_only(),
            Self::Brg(_) => true,
        }
    }

    fn pattern(&self, group: usize, n_qubits: usize) -> BasisPattern {
        match self {
            Self::Pauli(g) => g.groups[group].pattern.clone(),
            Self::Brg(_) => vec![None; n_qubits],
        }
    }

    fn value(&self, group: usize, b: u64) -> f64 {
        match self {
            Self::Pauli(g) => g.groups[group].value(b),
            Self::Brg(f) => f.group_value(group, b),
        }
    }

    /// Variance proxy of one setting from its (mitigated) outcome distribution.
    /// With `shots` known, each `⟨P⟩` is shrunk by `n/(n+2)` (the posterior
    /// mean under a flat prior), so a pilot that saw a single outcome does
    /// not report zero variance.
    fn proxy(&self, group: usize, dist: &QuasiDistribution, shots: Option<u64>) -> f64 {
        let shrink = shots.map_or(1.0, |n| n as f64 / (n as f64 + 2.0));
        match self {
            Self::Pauli(g) => {
                let terms: Vec<(f64, f64)> = g.groups[group]
                    .rotated_terms()
                    .iter()
                    .map(|&(z, c)| {
                        let e: f64 = dist
                            .probs
                            .iter()
                            .map(|(&b, &p)| if (b & z).count_ones() % 2 == 0 { p } else { -p })
                            .sum();
                        (c, shrink * e)
                    })
                    .collect();
                variance_proxy(&terms)
            }
            Self::Brg(_) => {
                let (m, s) = moments(dist, |b| self.value(group, b));
                (s - m * m).max(0.0) / shrink
            }
        }
    }
}

fn moments(dist: &QuasiDistribution, f: impl Fn(u64) -> f64) -> (f64, f64) {
    let mut m = 0.0;
    let mut s = 0.0;
    for (&b, &p) in &dist.probs {
        let v = f(b);
        m += p * v;
        s += p * v * v;
    }
    (m, s)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shots {
    /// Exact outcome probabilities (the infinite-shot limit).
    Exact,
    Plan(ShotPlan),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplingConfig {
    pub noise: NoiseModel,
    pub mitigation: MitigationConfig,
    pub shift: f64,
    pub seed: u64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self {
            noise: NoiseModel::noiseless(),
            mitigation: MitigationConfig::NONE,
            shift: 0.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveOptions {
    pub pilot_fraction: f64,
    pub pilot_floor: u64,
    pub floor: u64,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self {
            pilot_fraction: 0.1,
            pilot_floor: 10,
            floor: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledBuild {
    /// Finalized (Hermitized) matrix.
    pub matrix: EomMatrix,
    pub ledger: CostLedger,
    /// Settings where postselection rejected everything; the M3-only
    /// estimate was used instead.
    pub flagged: Vec<SettingId>,
    pub plan: Option<ShotPlan>,
    pub pilot: Option<ShotPlan>,
}

/// Prepared states in build order: `(i, i, Diagonal)` then, for `j > i`,
/// `(i, j, Real)` and `(i, j, Imaginary)`.
pub fn state_settings(n_basis: usize) -> Vec<(usize, usize, Phase)> {
    let mut out = Vec::with_capacity(n_basis * n_basis);
    for i in 0..n_basis {
        out.push((i, i, Phase::Diagonal));
        for j in i + 1..n_basis {
            out.push((i, j, Phase::Real));
            out.push((i, j, Phase::Imaginary));
        }
    }
    out
}

/// Every `(state, group)` measurement setting; `n_basis² · n_groups` in total.
pub fn eom_settings(n_basis: usize, n_groups: usize) -> Vec<SettingId> {
    state_settings(n_basis)
        .into_iter()
        .flat_map(|(i, j, phase)| (0..n_groups).map(move |group| SettingId { i, j, phase, group }))
        .collect()
}

fn prepared(basis: &EomBasis, i: usize, j: usize, phase: Phase) -> (Statevector, Vec<GateSite>) {
    let one = Complex64::new(1.0, 0.0);
    let (_, bi) = basis.determinant(i);
    let mut sites: Vec<GateSite> = (0..basis.n_qubits)
        .filter(|q| bi >> q & 1 == 1)
        .map(GateSite::One)
        .collect();
    let state = match phase {
        Phase::Diagonal => basis.superposition(&[(i, one)]),
        Phase::Real | Phase::Imaginary => {
            let c = if phase == Phase::Real {
                one
            } else {
                Complex64::new(0.0, 1.0)
            };
            let (_, bj) = basis.determinant(j);
            let diff: Vec<usize> = (0..basis.n_qubits)
                .filter(|q| (bi ^ bj) >> q & 1 == 1)
                .collect();
            sites.push(GateSite::One(diff[0]));
            if phase == Phase::Imaginary {
                sites.push(GateSite::One(diff[0]));
            }
            sites.extend(diff.windows(2).map(|w| GateSite::Two(w[0], w[1])));
            basis.superposition(&[(i, one * FRAC_1_SQRT_2), (j, c * FRAC_1_SQRT_2)])
        }
    };
    (state, sites)
}

/// Ansatz program followed by an optional orbital rotation into a BRG frame.
struct MeasuredProgram<'a> {
    base: CircuitProgram<'a>,
    rotation: Option<(GivensDecomposition, Vec<GateSite>)>,
}

impl NoisyProgram for MeasuredProgram<'_> {
    fn initial(&self) -> Statevector {
        self.base.initial()
    }

    fn n_steps(&self) -> usize {
        self.base.n_steps() + usize::from(self.rotation.is_some())
    }

    fn apply_step(&self, step: usize, psi: &mut [Complex64]) {
        if step < self.base.n_steps() {
            self.base.apply_step(step, psi);
        } else if let Some((dec, _)) = &self.rotation {
            apply_decomposition(psi, dec);
        }
    }

    fn sites(&self, step: usize) -> &[GateSite] {
        if step < self.base.n_steps() {
            self.base.sites(step)
        } else {
            self.rotation.as_ref().map_or(&[], |(_, s)| s.as_slice())
        }
    }
}

struct Ctx<'a> {
    ansatz: &'a AnsatzCircuit,
    basis: &'a EomBasis,
    scheme: &'a MeasurementScheme,
    cfg: &'a SamplingConfig,
    model: AssignmentModel,
    sector: SymmetrySector,
    rotations: Vec<Option<(GivensDecomposition, Vec<GateSite>)>>,
}

impl<'a> Ctx<'a> {
    fn new(
        ansatz: &'a AnsatzCircuit,
        basis: &'a EomBasis,
        scheme: &'a MeasurementScheme,
        cfg: &'a SamplingConfig,
    ) -> Result<Self> {
        if ansatz.n_qubits != basis.n_qubits {
            return Err(Error::QubitMismatch {
                expected: basis.n_qubits,
                found: ansatz.n_qubits,
            });
        }
        cfg.noise.validate()?;
        let n = basis.n_qubits;
        let rotations = match scheme {
            MeasurementScheme::Pauli(_) => vec![None; scheme.n_groups()],
            MeasurementScheme::Brg(f) => {
                if 2 * f.n_spatial != n {
                    return Err(Error::QubitMismatch {
                        expected: n,
                        found: 2 * f.n_spatial,
                    });
                }
                let sites = Element::OrbitalRotation(f.n_spatial).gate_sites(n);
                (0..f.group_count())
                    .map(|g| {
                        Ok(Some((
                            givens_decompose(&f.group_rotation(g).transpose())?,
                            sites.clone(),
                        )))
                    })
                    .collect::<Result<_>>()?
            }
        };
        Ok(Self {
            ansatz,
            basis,
            scheme,
            cfg,
            model: AssignmentModel::from_noise(&cfg.noise, n)?,
            sector: basis.sector(),
            rotations,
        })
    }

    fn n_qubits(&self) -> usize {
        self.basis.n_qubits
    }

    fn ideal_measured_state(&self, state: &Statevector, group: usize) -> Statevector {
        match &self.rotations[group] {
            None => state.clone(),
            Some((dec, _)) => {
                let mut s = state.clone();
                apply_decomposition(s.amplitudes_mut(), dec);
                s
            }
        }
    }

    /// Raw counts for every group of one prepared state.
    fn sample_state(
        &self,
        i: usize,
        j: usize,
        phase: Phase,
        shots: &[u64],
        rng: &mut ChaCha8Rng,
    ) -> Vec<CountsHistogram> {
        let (init, prep_sites) = prepared(self.basis, i, j, phase);
        let n = self.n_qubits();
        let noise = &self.cfg.noise;
        if noise.has_gate_noise() {
            return (0..shots.len())
                .map(|g| {
                    let program = MeasuredProgram {
                        base: CircuitProgram::new(self.ansatz, init.clone(), prep_sites.clone()),
                        rotation: self.rotations[g].clone(),
                    };
                    sample_noisy(&program, &self.scheme.pattern(g, n), shots[g], noise, rng)
                })
                .collect();
        }
        let state = self.ansatz.state_from(&init, &self.ansatz.params);
        (0..shots.len())
            .map(|g| {
                let measured = self.ideal_measured_state(&state, g);
                sample_counts(&measured, &self.scheme.pattern(g, n), shots[g], noise, rng)
            })
            .collect()
    }

    /// Exact outcome distributions (readout flips applied analytically).
    fn exact_state(&self, i: usize, j: usize, phase: Phase) -> Result<Vec<QuasiDistribution>> {
        if self.cfg.noise.has_gate_noise() {
            return Err(Error::Unsupported(
                "gate noise needs a finite shot plan".into(),
            ));
        }
        let (init, _) = prepared(self.basis, i, j, phase);
        let state = self.ansatz.state_from(&init, &self.ansatz.params);
        let n = self.n_qubits();
        let eps = self.cfg.noise.readout_for(n);
        Ok((0..self.scheme.n_groups())
            .map(|g| {
                let measured = self.ideal_measured_state(&state, g);
                let mut p = exact_distribution(&measured, &self.scheme.pattern(g, n));
                if self.cfg.noise.has_readout_noise() {
                    p = apply_readout_noise(&p, &eps);
                }
                QuasiDistribution::from_dense(n, &p)
            })
            .collect())
    }

    fn estimate(
        &self,
        group: usize,
        dist: &QuasiDistribution,
        shots: Option<u64>,
    ) -> Result<Estimate> {
        let z = self.scheme.z_diagonal(group);
        let (mitigated, flagged) =
            match mitigation_stack(dist, self.cfg.mitigation, &self.model, Some(self.sector), z) {
                Ok(m) => (m, false),
                Err(Error::EmptySector) => {
                    let cfg = MitigationConfig {
                        postselect: false,
                        ..self.cfg.mitigation
                    };
                    (mitigation_stack(dist, cfg, &self.model, None, z)?, true)
                }
                Err(e) => return Err(e),
            };
        let d = &mitigated.dist;
        let (mean, second) = moments(d, |b| self.scheme.value(group, b));
        let var_mean = match shots {
            None | Some(0) => 0.0,
            Some(n) => {
                (second - mean * mean).max(0.0) / (n as f64 * mitigated.retained_fraction).max(1.0)
            }
        };
        Ok(Estimate {
            mean,
            var_mean,
            shots: shots.unwrap_or(0),
            proxy: self.scheme.proxy(group, d, shots),
            flagged,
        })
    }
}

#[derive(Debug, Clone, Copy)]
struct Estimate {
    mean: f64,
    var_mean: f64,
    shots: u64,
    proxy: f64,
    flagged: bool,
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Counts for every setting in `settings` order, given per-setting shots.
fn sample_all(ctx: &Ctx, shots: &[u64], salt: u64) -> Vec<CountsHistogram> {
    let groups = ctx.scheme.n_groups();
    let states = state_settings(ctx.basis.len());
    let per_state: Vec<Vec<CountsHistogram>> = par::map_range(states.len(), |k| {
        let (i, j, phase) = states[k];
        let mut rng = stream_rng(ctx.cfg.seed, (salt << 40) | k as u64);
        ctx.sample_state(i, j, phase, &shots[k * groups..(k + 1) * groups], &mut rng)
    });
    per_state.into_iter().flatten().collect()
}

fn assemble(
    ctx: &Ctx,
    settings: &[SettingId],
    estimates: &[Estimate],
) -> (EomMatrix, CostLedger, Vec<SettingId>) {
    let n = ctx.basis.len();
    let groups = ctx.scheme.n_groups();
    let constant = ctx.scheme.constant();
    let states = state_settings(n);
    let mut energy = vec![(0.0, 0.0, 0u64); states.len()];
    let mut ledger = CostLedger::default();
    let mut flagged = Vec::new();
    for (k, e) in energy.iter_mut().enumerate() {
        let block = &estimates[k * groups..(k + 1) * groups];
        e.0 = constant + block.iter().map(|x| x.mean).sum::<f64>();
        e.1 = block.iter().map(|x| x.var_mean).sum();
        e.2 = block.iter().map(|x| x.shots).sum();
        for (g, x) in block.iter().enumerate() {
            ledger.circuits_executed += 1;
            ledger.shots_consumed += x.shots;
            if x.flagged {
                flagged.push(settings[k * groups + g]);
            }
        }
    }
    let diag_index: Vec<usize> = states
        .iter()
        .enumerate()
        .filter(|(_, s)| s.2 == Phase::Diagonal)
        .map(|(k, _)| k)
        .collect();
    let mut m = EomMatrix::zeros(n, ctx.cfg.shift);
    for i in 0..n {
        let (e, v, s) = energy[diag_index[i]];
        m.set(i, i, e - ctx.cfg.shift, 0.0, s, v.sqrt());
        ledger.elements_evaluated += 1;
    }
    let mut k = 0;
    while k < states.len() {
        let (i, j, phase) = states[k];
        if phase == Phase::Diagonal {
            k += 1;
            continue;
        }
        let (ep, vp, sp) = energy[k];
        let (ei, _, si) = energy[k + 1];
        let (eii, vii, _) = energy[diag_index[i]];
        let (ejj, vjj, _) = energy[diag_index[j]];
        let mid = 0.5 * (eii + ejj);
        let stderr = (vp + 0.25 * (vii + vjj)).sqrt();
        m.set(i, j, ep - mid, -(ei - mid), sp + si, stderr);
        ledger.elements_evaluated += 1;
        k += 2;
    }
    m.finalize();
    (m, ledger, flagged)
}

/// Sampled (or exact-probability) build with mitigation applied per setting.
pub fn build_m_sampled(
    ansatz: &AnsatzCircuit,
    basis: &EomBasis,
    scheme: &MeasurementScheme,
    shots: &Shots,
    cfg: &SamplingConfig,
) -> Result<SampledBuild> {
    let ctx = Ctx::new(ansatz, basis, scheme, cfg)?;
    let settings = eom_settings(basis.len(), scheme.n_groups());
    let groups = scheme.n_groups();
    let estimates: Vec<Estimate> = match shots {
        Shots::Exact => {
            let states = state_settings(basis.len());
            let dists = par::map_range(states.len(), |k| {
                ctx.exact_state(states[k].0, states[k].1, states[k].2)
            });
            let mut out = Vec::with_capacity(settings.len());
            for d in dists {
                for (g, dist) in d?.iter().enumerate() {
                    out.push(ctx.estimate(g, dist, None)?);
                }
            }
            out
        }
        Shots::Plan(plan) => {
            let per_setting = plan_shots(plan, &settings)?;
            if let Some(k) = per_setting.iter().position(|&n| n == 0) {
                return Err(Error::PlanMismatch(format!(
                    "setting {} has no shots",
                    settings[k]
                )));
            }
            let counts = sample_all(&ctx, &per_setting, 0);
            counts
                .iter()
                .enumerate()
                .map(|(s, c)| ctx.estimate(s % groups, &c.to_quasi(), Some(c.shots)))
                .collect::<Result<_>>()?
        }
    };
    let (matrix, ledger, flagged) = assemble(&ctx, &settings, &estimates);
    let plan = match shots {
        Shots::Plan(p) => Some(p.clone()),
        Shots::Exact => None,
    };
    Ok(SampledBuild {
        matrix,
        ledger,
        flagged,
        plan,
        pilot: None,
    })
}

fn plan_shots(plan: &ShotPlan, settings: &[SettingId]) -> Result<Vec<u64>> {
    if plan.len() != settings.len() {
        return Err(Error::PlanMismatch(format!(
            "plan has {} settings, basis needs {}",
            plan.len(),
            settings.len()
        )));
    }
    settings
        .iter()
        .map(|s| {
            plan.shots_for(s)
                .ok_or_else(|| Error::PlanMismatch(format!("no allocation for setting {s}")))
        })
        .collect()
}

/// Pilot pass, variance-proportional allocation of the rest of `budget`,
/// then estimates from the pooled pilot and main counts.
pub fn build_m_adaptive(
    ansatz: &AnsatzCircuit,
    basis: &EomBasis,
    scheme: &MeasurementScheme,
    budget: u64,
    options: &AdaptiveOptions,
    cfg: &SamplingConfig,
) -> Result<SampledBuild> {
    let ctx = Ctx::new(ansatz, basis, scheme, cfg)?;
    let settings = eom_settings(basis.len(), scheme.n_groups());
    let groups = scheme.n_groups();
    let pilot = pilot_plan(
        &settings,
        budget,
        options.pilot_fraction,
        options.pilot_floor,
    )?;
    let pilot_shots = plan_shots(&pilot, &settings)?;
    let mut counts = sample_all(&ctx, &pilot_shots, 0);
    let variances: Vec<f64> = counts
        .iter()
        .enumerate()
        .map(|(s, c)| {
            ctx.estimate(s % groups, &c.to_quasi(), Some(c.shots))
                .map(|e| e.proxy)
        })
        .collect::<Result<_>>()?;
    let plan =
        allocate_shots_adaptive(&settings, &variances, budget, pilot.total(), options.floor)?;
    let main = sample_all(&ctx, &plan_shots(&plan, &settings)?, 1);
    for (c, extra) in counts.iter_mut().zip(&main) {
        c.merge(extra);
    }
    let estimates: Vec<Estimate> = counts
        .iter()
        .enumerate()
        .map(|(s, c)| ctx.estimate(s % groups, &c.to_quasi(), Some(c.shots)))
        .collect::<Result<_>>()?;
    let (matrix, mut ledger, flagged) = assemble(&ctx, &settings, &estimates);
    // Pilot and main passes are separate executions of the same setting.
    ledger.circuits_executed += main.iter().filter(|c| c.shots > 0).count() as u64;
    Ok(SampledBuild {
        matrix,
        ledger,
        flagged,
        plan: Some(plan),
        pilot: Some(pilot),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::{adapt_vqe, AdaptConfig};
    use crate::chem::parse_fcidump;
    use crate::eom::{build_m_exact, diagonalize};
    use crate::measurement::{allocate_shots_uniform, budget_accounting};
    use crate::operators::{build_excitation_pool, build_hamiltonian};
    use crate::simulator::{hartree_fock_state, SparseOperator};

    const H2: &str = include_str!("../../../../fixtures/h2/h2_sto3g_0.740.fcidump");

    struct Fixture {
        ints: MolecularIntegrals,
        h: PauliSum,
        u: AnsatzCircuit,
        basis: EomBasis,
    }

    fn h2() -> Fixture {
        let ints = parse_fcidump(H2).unwrap();
        let h = build_hamiltonian(&ints).unwrap();
        let u = adapt_vqe(
            &h,
            &build_excitation_pool(2, 2),
            &AdaptConfig::default(),
            &hartree_fock_state(4, 2),
        )
        .unwrap()
        .circuit;
        Fixture {
            ints,
            h,
            u,
            basis: EomBasis::singles_doubles(4, 2).unwrap(),
        }
    }

    #[test]
    fn exact_limit_matches_exact_build() {
        let f = h2();
        let mut exact =
            build_m_exact(&f.u, &SparseOperator::from_pauli_sum(&f.h), &f.basis, 0.0).unwrap();
        exact.finalize();
        for scheme in [
            MeasurementScheme::pauli(&f.h).unwrap(),
            MeasurementScheme::brg(&f.ints, 0.0).unwrap(),
        ] {
            let b = build_m_sampled(
                &f.u,
                &f.basis,
                &scheme,
                &Shots::Exact,
                &SamplingConfig::default(),
            )
            .unwrap();
            let diff = (&b.matrix.values - &exact.values).abs().max();
            assert!(diff < 1e-12, "{} {diff}", scheme.name());
        }
    }

    #[test]
    fn ledger_matches_budget_identity() {
        let f = h2();
        let scheme = MeasurementScheme::pauli(&f.h).unwrap();
        let u = scheme.n_groups() as u64;
        let n_m = (f.basis.len() * f.basis.len()) as u64;
        let settings = eom_settings(f.basis.len(), scheme.n_groups());
        assert_eq!(settings.len() as u64, u * n_m);
        let plan = allocate_shots_uniform(&settings, budget_accounting(u, 100, n_m), 0).unwrap();
        let b = build_m_sampled(
            &f.u,
            &f.basis,
            &scheme,
            &Shots::Plan(plan),
            &SamplingConfig::default(),
        )
        .unwrap();
        assert_eq!(b.ledger.shots_consumed, budget_accounting(u, 100, n_m));
        assert_eq!(b.ledger.circuits_executed, u * n_m);
        assert_eq!(b.ledger.elements_evaluated, 10);
    }

    #[test]
    fn sampled_build_is_deterministic_and_close() {
        let f = h2();
        let scheme = MeasurementScheme::pauli(&f.h).unwrap();
        let settings = eom_settings(f.basis.len(), scheme.n_groups());
        let plan = allocate_shots_uniform(&settings, 80_000, 0).unwrap();
        let cfg = SamplingConfig {
            seed: 9,
            ..Default::default()
        };
        let a = build_m_sampled(&f.u, &f.basis, &scheme, &Shots::Plan(plan.clone()), &cfg).unwrap();
        let b = build_m_sampled(&f.u, &f.basis, &scheme, &Shots::Plan(plan), &cfg).unwrap();
        assert_eq!(a, b);
        let exact = diagonalize(
            &build_m_exact(&f.u, &SparseOperator::from_pauli_sum(&f.h), &f.basis, 0.0).unwrap(),
        );
        let got = diagonalize(&a.matrix);
        for (x, y) in got.total_energies.iter().zip(&exact.total_energies) {
            assert!((x - y).abs() < 0.05, "{x} vs {y}");
        }
        assert!(a.matrix.stderr[(0, 1)] > 0.0);
    }

    #[test]
    fn adaptive_spends_exact_budget() {
        let f = h2();
        let scheme = MeasurementScheme::pauli(&f.h).unwrap();
        let cfg = SamplingConfig {
            seed: 3,
            ..Default::default()
        };
        let b = build_m_adaptive(
            &f.u,
            &f.basis,
            &scheme,
            50_000,
            &AdaptiveOptions::default(),
            &cfg,
        )
        .unwrap();
        assert_eq!(b.ledger.shots_consumed, 50_000);
        assert_eq!(b.plan.unwrap().total() + b.pilot.unwrap().total(), 50_000);
    }

    #[test]
    fn gate_noise_needs_shots() {
        let f = h2();
        let scheme = MeasurementScheme::pauli(&f.h).unwrap();
        let cfg = SamplingConfig {
            noise: NoiseModel {
                depol_2q: 1e-3,
                ..NoiseModel::noiseless()
            },
            ..Default::default()
        };
        assert!(matches!(
            build_m_sampled(&f.u, &f.basis, &scheme, &Shots::Exact, &cfg),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn plan_must_cover_settings() {
        let f = h2();
        let scheme = MeasurementScheme::pauli(&f.h).unwrap();
        let plan = allocate_shots_uniform(&eom_settings(2, 5), 100, 0).unwrap();
        let err = build_m_sampled(
            &f.u,
            &f.basis,
            &scheme,
            &Shots::Plan(plan),
            &SamplingConfig::default(),
        );
        assert!(matches!(err, Err(Error::PlanMismatch(_))));
    }

    #[test]
    fn unmeasured_setting_is_rejected() {
        let f = h2();
        let scheme = MeasurementScheme::pauli(&f.h).unwrap();
        let settings = eom_settings(f.basis.len(), scheme.n_groups());
        let plan = allocate_shots_uniform(&settings, settings.len() as u64 - 1, 0).unwrap();
        let err = build_m_sampled(
            &f.u,
            &f.basis,
            &scheme,
            &Shots::Plan(plan),
            &SamplingConfig::default(),
        );
        assert!(matches!(err, Err(Error::PlanMismatch(_))));
    }
}

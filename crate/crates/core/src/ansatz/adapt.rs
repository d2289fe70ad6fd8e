//! Gradient-driven operator selection and the static ansatz builders.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::circuit::{AnsatzCircuit, AnsatzKind, Element};
use super::optimize::{optimize, Method, Objective, OptimizeOptions, OptimizeResult, Status};
use crate::error::{Error, Result};
use crate::operators::{FermionGenerator, PauliSum};
use crate::par;
use crate::simulator::{apply_anti_hermitian, SparseOperator, Statevector};

/// Energy of a circuit as an optimizer objective.
pub struct EnergyObjective<'a> {
    pub circuit: &'a AnsatzCircuit,
    pub hamiltonian: &'a SparseOperator,
}

impl Objective for EnergyObjective<'_> {
    fn value(&self, x: &[f64]) -> f64 {
        self.circuit.energy(self.hamiltonian, x)
    }

    fn value_and_gradient(&self, x: &[f64]) -> Option<(f64, Vec<f64>)> {
        self.circuit.energy_and_gradient(self.hamiltonian, x)
    }
}

/// Optimizes `circuit.params` in place starting from their current values.
pub fn optimize_circuit(
    circuit: &mut AnsatzCircuit,
    h: &SparseOperator,
    options: &OptimizeOptions,
) -> OptimizeResult {
    let init = circuit.params.clone();
    let result = optimize(
        &EnergyObjective {
            circuit,
            hamiltonian: h,
        },
        &init,
        options,
    );
    circuit.params = result.x.clone();
    result
}

/// `⟨ψ|[H, A]|ψ⟩ = 2 Re⟨Hψ|Aψ⟩` with `A = G − G†`; the derivative of the energy
/// when `exp(θA)` is appended to the circuit.
pub fn operator_gradient(
    state: &Statevector,
    hamiltonian: &PauliSum,
    generator: &FermionGenerator,
) -> Result<f64> {
    if hamiltonian.n_qubits() != state.n_qubits() {
        return Err(Error::QubitMismatch {
            expected: state.n_qubits(),
            found: hamiltonian.n_qubits(),
        });
    }
    if generator.max_mode() >= state.n_qubits() {
        return Err(Error::IndexOutOfRange {
            index: generator.max_mode(),
            limit: state.n_qubits(),
        });
    }
    let mut hpsi = vec![Complex64::new(0.0, 0.0); state.dim()];
    hamiltonian.apply_into(state.amplitudes(), &mut hpsi);
    Ok(gradient_with(state.amplitudes(), &hpsi, generator))
}

fn gradient_with(psi: &[Complex64], hpsi: &[Complex64], generator: &FermionGenerator) -> f64 {
    let mut apsi = vec![Complex64::new(0.0, 0.0); psi.len()];
    apply_anti_hermitian(psi, generator, &mut apsi);
    2.0 * hpsi
        .iter()
        .zip(&apsi)
        .map(|(h, a)| (h.conj() * a).re)
        .sum::<f64>()
}

pub fn pool_gradients(
    state: &Statevector,
    h: &SparseOperator,
    pool: &[FermionGenerator],
) -> Vec<f64> {
    let hpsi = h.apply(state.amplitudes());
    par::map(pool, |g| gradient_with(state.amplitudes(), &hpsi, g))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdaptConfig {
    pub gradient_norm_threshold: f64,
    pub max_operators: usize,
    pub optimizer: OptimizeOptions,
}

impl Default for AdaptConfig {
    fn default() -> Self {
        Self {
            gradient_norm_threshold: 1e-3,
            max_operators: 50,
            optimizer: OptimizeOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdaptStatus {
    Converged,
    MaxOperators,
    /// An optimization hit its budget or stalled; the best circuit so far is kept.
    OptimizerWarning,
}

#[derive(Debug, Clone)]
pub struct AdaptResult {
    pub circuit: AnsatzCircuit,
    /// Energy before any operator, then after each accepted iteration.
    pub energies: Vec<f64>,
    pub gradient_norms: Vec<f64>,
    /// Pool indices in selection order.
    pub selected: Vec<usize>,
    pub status: AdaptStatus,
}

impl AdaptResult {
    pub fn energy(&self) -> f64 {
        *self
            .energies
            .last()
            .expect("trace starts with the reference energy")
    }
}

pub fn adapt_vqe(
    hamiltonian: &PauliSum,
    pool: &[FermionGenerator],
    config: &AdaptConfig,
    reference: &Statevector,
) -> Result<AdaptResult> {
    if pool.is_empty() {
        return Err(Error::EmptyPool);
    }
    if config.gradient_norm_threshold <= 0.0 {
        return Err(Error::Parse("gradient threshold must be positive".into()));
    }
    if hamiltonian.n_qubits() != reference.n_qubits() {
        return Err(Error::QubitMismatch {
            expected: reference.n_qubits(),
            found: hamiltonian.n_qubits(),
        });
    }
    let h = SparseOperator::from_pauli_sum(hamiltonian);
    let n_electrons = reference
        .amplitudes()
        .iter()
        .position(|a| a.norm_sqr() > 0.5)
        .map(|b| (b as u64).count_ones() as usize)
        .unwrap_or(0);
    let mut circuit = AnsatzCircuit::new(AnsatzKind::Adapt, reference.n_qubits(), n_electrons);
    let mut state = reference.clone();
    let mut energies = vec![h.expectation(&state)?];
    let mut gradient_norms = Vec::new();
    let mut selected = Vec::new();
    let mut status = AdaptStatus::MaxOperators;
    loop {
        let grads = pool_gradients(&state, &h, pool);
        let norm = grads.iter().map(|g| g * g).sum::<f64>().sqrt();
        gradient_norms.push(norm);
        if norm < config.gradient_norm_threshold {
            if status != AdaptStatus::OptimizerWarning {
                status = AdaptStatus::Converged;
            }
            break;
        }
        if circuit.len() >= config.max_operators {
            break;
        }
        let mut best = 0;
        for (k, g) in grads.iter().enumerate() {
            if g.abs() > grads[best].abs() {
                best = k;
            }
        }
        selected.push(best);
        circuit.push(Element::Excitation(pool[best].clone()), &[0.0]);
        let result = optimize_from(&mut circuit, &h, reference, &config.optimizer);
        if result.status != Status::Converged {
            status = AdaptStatus::OptimizerWarning;
        }
        state = circuit.state_from(reference, &circuit.params);
        energies.push(result.value);
    }
    Ok(AdaptResult {
        circuit,
        energies,
        gradient_norms,
        selected,
        status,
    })
}

fn optimize_from(
    circuit: &mut AnsatzCircuit,
    h: &SparseOperator,
    reference: &Statevector,
    options: &OptimizeOptions,
) -> OptimizeResult {
    struct FromRef<'a> {
        c: &'a AnsatzCircuit,
        h: &'a SparseOperator,
        r: &'a Statevector,
    }
    impl Objective for FromRef<'_> {
        fn value(&self, x: &[f64]) -> f64 {
            self.h
                .expectation(&self.c.state_from(self.r, x))
                .expect("sizes agree")
        }
        fn value_and_gradient(&self, x: &[f64]) -> Option<(f64, Vec<f64>)> {
            if self.r == &self.c.reference() {
                self.c.energy_and_gradient(self.h, x)
            } else {
                None
            }
        }
    }
    let init = circuit.params.clone();
    let result = optimize(
        &FromRef {
            c: circuit,
            h,
            r: reference,
        },
        &init,
        options,
    );
    circuit.params = result.x.clone();
    result
}

/// One excitation per pool entry, applied in pool order, all angles zero.
pub fn uccsd_ansatz(
    pool: &[FermionGenerator],
    n_qubits: usize,
    n_electrons: usize,
) -> AnsatzCircuit {
    let mut c = AnsatzCircuit::new(AnsatzKind::Uccsd, n_qubits, n_electrons);
    for g in pool {
        c.push(Element::Excitation(g.clone()), &[0.0]);
    }
    c
}

/// Layers of Ry on every qubit followed by a CNOT cascade `q → q+1`; angles
/// start uniform in [−0.1, 0.1].
pub fn hea_ansatz(
    n_qubits: usize,
    layers: usize,
    n_electrons: usize,
    seed: u64,
) -> Result<AnsatzCircuit> {
    if layers == 0 {
        return Err(Error::Parse("HEA needs at least one layer".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = AnsatzCircuit::new(AnsatzKind::Hea, n_qubits, n_electrons);
    for _ in 0..layers {
        for q in 0..n_qubits {
            c.push(Element::Ry(q), &[rng.gen_range(-0.1..=0.1)]);
        }
        for q in 0..n_qubits.saturating_sub(1) {
            c.push(Element::Cnot(q, q + 1), &[]);
        }
    }
    Ok(c)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LucjConfig {
    pub layers: usize,
    pub n_spatial: usize,
    /// Allowed Jastrow pairs `(i, j)` of spatial orbitals, stored with `i ≤ j`.
    pub mask: Vec<(usize, usize)>,
    /// Closing orbital rotation after the last Jastrow factor.
    pub final_rotation: bool,
}

impl LucjConfig {
    /// On-site and nearest-neighbour pairs.
    pub fn local(layers: usize, n_spatial: usize) -> Self {
        let mut mask = Vec::new();
        for i in 0..n_spatial {
            mask.push((i, i));
            if i + 1 < n_spatial {
                mask.push((i, i + 1));
            }
        }
        Self {
            layers,
            n_spatial,
            mask,
            final_rotation: true,
        }
    }

    fn canonical_mask(&self) -> Result<Vec<(usize, usize)>> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &(i, j) in &self.mask {
            if i >= self.n_spatial || j >= self.n_spatial {
                return Err(Error::MaskViolation(i, j));
            }
            let p = (i.min(j), i.max(j));
            if !out.contains(&p) {
                out.push(p);
            }
        }
        out.sort_unstable();
        Ok(out)
    }
}

/// Explicit LUCJ parameters: antisymmetric `κ_μ`, symmetric `J_μ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LucjParameters {
    pub kappas: Vec<DMatrix<f64>>,
    pub jastrows: Vec<DMatrix<f64>>,
    pub final_kappa: Option<DMatrix<f64>>,
}

pub fn lucj_ansatz(
    config: &LucjConfig,
    n_electrons: usize,
    params: Option<&LucjParameters>,
) -> Result<AnsatzCircuit> {
    if config.layers == 0 {
        return Err(Error::Parse("LUCJ needs at least one layer".into()));
    }
    let n = config.n_spatial;
    let mask = config.canonical_mask()?;
    let mut c = AnsatzCircuit::new(AnsatzKind::Lucj, 2 * n, n_electrons);
    let upper = |k: &DMatrix<f64>| -> Result<Vec<f64>> {
        if k.nrows() != n || k.ncols() != n {
            return Err(Error::QubitMismatch {
                expected: n,
                found: k.nrows(),
            });
        }
        let dev = (k + k.transpose()).amax();
        if dev > 1e-12 {
            return Err(Error::NotAntiHermitian);
        }
        Ok((0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| k[(p, q)])
            .collect())
    };
    let jvals = |j: &DMatrix<f64>| -> Result<Vec<f64>> {
        let dev = (j - j.transpose()).amax();
        if dev > 1e-12 {
            return Err(Error::NotSymmetric(dev));
        }
        for p in 0..n {
            for q in p..n {
                if j[(p, q)] != 0.0 && !mask.contains(&(p, q)) {
                    return Err(Error::MaskViolation(p, q));
                }
            }
        }
        Ok(mask.iter().map(|&(p, q)| j[(p, q)]).collect())
    };
    let n_rot = n * (n - 1) / 2;
    for layer in 0..config.layers {
        let (kv, jv) = match params {
            Some(p) => (upper(&p.kappas[layer])?, jvals(&p.jastrows[layer])?),
            None => (vec![0.0; n_rot], vec![0.0; mask.len()]),
        };
        c.push(Element::OrbitalRotation(n), &kv);
        c.push(Element::Jastrow(mask.clone()), &jv);
    }
    if config.final_rotation {
        let kv = match params.and_then(|p| p.final_kappa.as_ref()) {
            Some(k) => upper(k)?,
            None => vec![0.0; n_rot],
        };
        c.push(Element::OrbitalRotation(n), &kv);
    }
    Ok(c)
}

/// Small uniform perturbation of every parameter; zero is a stationary point
/// for canonical orbitals.
pub fn perturb_parameters(circuit: &mut AnsatzCircuit, scale: f64, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for p in &mut circuit.params {
        *p += rng.gen_range(-scale..=scale);
    }
}

/// Best of `restarts` optimizations, each from the current parameters plus a
/// seeded perturbation of size `scale`.
pub fn optimize_with_restarts(
    circuit: &mut AnsatzCircuit,
    h: &SparseOperator,
    options: &OptimizeOptions,
    restarts: usize,
    scale: f64,
    seed: u64,
) -> OptimizeResult {
    let start = circuit.params.clone();
    let mut best: Option<(OptimizeResult, Vec<f64>)> = None;
    for r in 0..restarts.max(1) as u64 {
        circuit.params = start.clone();
        perturb_parameters(circuit, scale, seed.wrapping_mul(1_000_003).wrapping_add(r));
        let res = optimize_circuit(circuit, h, options);
        if best.as_ref().is_none_or(|(b, _)| res.value < b.value) {
            best = Some((res, circuit.params.clone()));
        }
    }
    let (res, params) = best.expect("at least one restart");
    circuit.params = params;
    res
}

pub fn default_method_for(circuit: &AnsatzCircuit) -> Method {
    if circuit.has_adjoint_gradient() {
        Method::Gradient
    } else {
        Method::DerivativeFree
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chem::{fci_solve, parse_fcidump};
    use crate::operators::{
        build_excitation_pool, build_hamiltonian, number_operator, sz_operator,
    };
    use crate::simulator::{expectation, hartree_fock_state};

    const H2: &str = include_str!("../../../../fixtures/h2/h2_sto3g_0.740.fcidump");

    fn h2() -> (PauliSum, f64) {
        let ints = parse_fcidump(H2).unwrap();
        (
            build_hamiltonian(&ints).unwrap(),
            fci_solve(&ints, 1).unwrap().energies[0],
        )
    }

    #[test]
    fn gradient_matches_finite_difference_on_hf() {
        let (h, _) = h2();
        let hf = hartree_fock_state(4, 2);
        let g = FermionGenerator::double(0, 1, 2, 3);
        let analytic = operator_gradient(&hf, &h, &g).unwrap();
        let e = |t: f64| {
            let mut s = hf.clone();
            crate::simulator::apply_excitation(s.amplitudes_mut(), &g, t);
            expectation(&s, &h).unwrap()
        };
        let fd = (e(1e-5) - e(-1e-5)) / 2e-5;
        assert!((analytic - fd).abs() < 1e-7, "{analytic} vs {fd}");
        assert!(analytic.abs() > 1e-3);
    }

    #[test]
    fn eigenstate_has_zero_gradients() {
        let ints = parse_fcidump(H2).unwrap();
        let (h, _) = h2();
        let ground = fci_solve(&ints, 1).unwrap().vector(0);
        for g in build_excitation_pool(2, 2) {
            assert!(operator_gradient(&ground, &h, &g).unwrap().abs() < 1e-10);
        }
    }

    #[test]
    fn adapt_h2_reaches_fci_with_one_double() {
        let (h, fci) = h2();
        let pool = build_excitation_pool(2, 2);
        let res = adapt_vqe(
            &h,
            &pool,
            &AdaptConfig::default(),
            &hartree_fock_state(4, 2),
        )
        .unwrap();
        assert_eq!(res.circuit.len(), 1);
        assert_eq!(res.selected, vec![2]);
        assert!((res.energy() - fci).abs() < 1e-8);
        assert_eq!(res.status, AdaptStatus::Converged);
    }

    #[test]
    fn large_threshold_gives_empty_circuit() {
        let (h, _) = h2();
        let pool = build_excitation_pool(2, 2);
        let cfg = AdaptConfig {
            gradient_norm_threshold: 1e3,
            ..AdaptConfig::default()
        };
        let hf = hartree_fock_state(4, 2);
        let res = adapt_vqe(&h, &pool, &cfg, &hf).unwrap();
        assert!(res.circuit.is_empty());
        assert_eq!(res.energy(), expectation(&hf, &h).unwrap());
        assert_eq!(adapt_vqe(&h, &[], &cfg, &hf).unwrap_err(), Error::EmptyPool);
    }

    #[test]
    fn derivative_free_h2_one_parameter() {
        let (h, fci) = h2();
        let sp = SparseOperator::from_pauli_sum(&h);
        let mut c = AnsatzCircuit::new(AnsatzKind::Adapt, 4, 2);
        c.push(
            Element::Excitation(FermionGenerator::double(0, 1, 2, 3)),
            &[0.0],
        );
        let r = optimize_circuit(
            &mut c,
            &sp,
            &OptimizeOptions::with_method(Method::DerivativeFree),
        );
        assert!((r.value - fci).abs() < 1e-8);
    }

    #[test]
    fn builders() {
        let pool = build_excitation_pool(2, 2);
        let u = uccsd_ansatz(&pool, 4, 2);
        assert_eq!(u.n_params(), 3);
        let (h, _) = h2();
        let hf = hartree_fock_state(4, 2);
        assert_eq!(u.state(), hf);
        let hea = hea_ansatz(4, 4, 2, 7).unwrap();
        assert_eq!(hea.n_params(), 16);
        assert!(hea.params.iter().all(|p| p.abs() <= 0.1));
        let mut zero = hea.clone();
        zero.params.iter_mut().for_each(|p| *p = 0.0);
        assert_eq!(zero.state(), Statevector::zero(4));
        let _ = h;
    }

    #[test]
    fn lucj_h2_reaches_fci() {
        let (h, fci) = h2();
        let sp = SparseOperator::from_pauli_sum(&h);
        let mut c = lucj_ansatz(&LucjConfig::local(1, 2), 2, None).unwrap();
        assert_eq!(c.state(), hartree_fock_state(4, 2));
        let r = optimize_with_restarts(
            &mut c,
            &sp,
            &OptimizeOptions::with_method(Method::Gradient),
            5,
            0.3,
            3,
        );
        assert!((r.value - fci).abs() < 1e-6, "{} vs {fci}", r.value);
        let s = c.state();
        assert!((expectation(&s, &number_operator(4)).unwrap() - 2.0).abs() < 1e-10);
        assert!(expectation(&s, &sz_operator(4)).unwrap().abs() < 1e-10);
    }

    #[test]
    fn lucj_jastrow_only_keeps_probabilities() {
        let cfg = LucjConfig {
            final_rotation: false,
            ..LucjConfig::local(1, 2)
        };
        let mut c = lucj_ansatz(&cfg, 2, None).unwrap();
        // Parameters: one rotation angle, then three Jastrow entries.
        c.params = vec![0.3, 0.0, 0.0, 0.0];
        let before = c.state().probabilities();
        c.params = vec![0.3, 0.7, -0.4, 1.1];
        let after = c.state().probabilities();
        for (a, b) in before.iter().zip(&after) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn lucj_mask_violation() {
        let cfg = LucjConfig {
            mask: vec![(0, 0)],
            ..LucjConfig::local(1, 2)
        };
        let p = LucjParameters {
            kappas: vec![DMatrix::zeros(2, 2)],
            jastrows: vec![DMatrix::from_row_slice(2, 2, &[0.0, 0.2, 0.2, 0.0])],
            final_kappa: None,
        };
        assert_eq!(
            lucj_ansatz(&cfg, 2, Some(&p)).unwrap_err(),
            Error::MaskViolation(0, 1)
        );
        let bad = LucjConfig {
            mask: vec![(0, 5)],
            ..LucjConfig::local(1, 2)
        };
        assert!(lucj_ansatz(&bad, 2, None).is_err());
    }
}

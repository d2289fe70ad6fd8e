//! Parameterized circuits over the statevector backend.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operators::{anti_hermitian_image, Axis, FermionGenerator, PauliSum};
use crate::simulator::noise::{GateSite, NoisyProgram};
use crate::simulator::orbital::{apply_decomposition, givens_count, givens_decompose};
use crate::simulator::{
    apply_anti_hermitian, apply_excitation, hartree_fock_state, SparseOperator, Statevector,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnsatzKind {
    Adapt,
    Uccsd,
    Hea,
    Lucj,
}

impl AnsatzKind {
    pub fn name(self) -> &'static str {
        match self {
            AnsatzKind::Adapt => "adapt",
            AnsatzKind::Uccsd => "uccsd",
            AnsatzKind::Hea => "hea",
            AnsatzKind::Lucj => "lucj",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "adapt" => Ok(AnsatzKind::Adapt),
            "uccsd" => Ok(AnsatzKind::Uccsd),
            "hea" => Ok(AnsatzKind::Hea),
            "lucj" => Ok(AnsatzKind::Lucj),
            _ => Err(Error::Parse(format!("unknown ansatz kind '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    /// `exp(θ(G − G†))`.
    Excitation(FermionGenerator),
    /// `exp(−iθY/2)` on one qubit.
    Ry(usize),
    Cnot(usize, usize),
    /// `Û(exp κ)` with κ antisymmetric, parameterized by its strict upper triangle.
    OrbitalRotation(usize),
    /// `exp(i Σ J_ij n_i n_j)` over spatial-orbital occupations, one parameter per pair.
    Jastrow(Vec<(usize, usize)>),
}

impl Element {
    pub fn n_params(&self) -> usize {
        match self {
            Element::Excitation(_) | Element::Ry(_) => 1,
            Element::Cnot(..) => 0,
            Element::OrbitalRotation(n) => givens_count(*n),
            Element::Jastrow(pairs) => pairs.len(),
        }
    }

    pub fn apply(&self, psi: &mut [Complex64], params: &[f64]) {
        match self {
            Element::Excitation(g) => apply_excitation(psi, g, params[0]),
            Element::Ry(q) => apply_ry(psi, *q, params[0]),
            Element::Cnot(c, t) => apply_cnot(psi, *c, *t),
            Element::OrbitalRotation(n) => {
                if params.iter().any(|&p| p != 0.0) {
                    let r = kappa_matrix(*n, params).exp();
                    let dec =
                        givens_decompose(&r).expect("exp of an antisymmetric matrix is orthogonal");
                    apply_decomposition(psi, &dec);
                }
            }
            Element::Jastrow(pairs) => apply_jastrow(psi, pairs, params, 1.0),
        }
    }

    pub fn apply_inverse(&self, psi: &mut [Complex64], params: &[f64]) {
        match self {
            Element::Excitation(g) => apply_excitation(psi, g, -params[0]),
            Element::Ry(q) => apply_ry(psi, *q, -params[0]),
            Element::Cnot(c, t) => apply_cnot(psi, *c, *t),
            Element::OrbitalRotation(n) => {
                let neg: Vec<f64> = params.iter().map(|p| -p).collect();
                Element::OrbitalRotation(*n).apply(psi, &neg);
            }
            Element::Jastrow(pairs) => apply_jastrow(psi, pairs, params, -1.0),
        }
    }

    /// Abstract gate sites after compiling to Pauli rotations with CNOT ladders.
    pub fn gate_sites(&self, n_qubits: usize) -> Vec<GateSite> {
        match self {
            Element::Excitation(g) => {
                let image = anti_hermitian_image(g, n_qubits).expect("generator fits the register");
                rotation_sites(&image)
            }
            Element::Ry(q) => vec![GateSite::One(*q)],
            Element::Cnot(c, t) => vec![GateSite::Two(*c, *t)],
            Element::OrbitalRotation(n) => {
                let mut sites = Vec::new();
                for p in 0..n.saturating_sub(1) {
                    let copies = n - 1 - p;
                    for sigma in 0..2 {
                        let g = FermionGenerator::single(2 * p + sigma, 2 * p + 2 + sigma);
                        let s = rotation_sites(&anti_hermitian_image(&g, n_qubits).expect("fits"));
                        for _ in 0..copies {
                            sites.extend_from_slice(&s);
                        }
                    }
                }
                sites
            }
            Element::Jastrow(pairs) => {
                let mut sites = Vec::new();
                for &(i, j) in pairs {
                    let modes: Vec<(usize, usize)> = if i == j {
                        vec![(2 * i, 2 * i + 1)]
                    } else {
                        vec![
                            (2 * i, 2 * j),
                            (2 * i, 2 * j + 1),
                            (2 * i + 1, 2 * j),
                            (2 * i + 1, 2 * j + 1),
                        ]
                    };
                    for (a, b) in modes {
                        sites.push(GateSite::Two(a, b));
                        sites.push(GateSite::One(b));
                        sites.push(GateSite::Two(a, b));
                    }
                }
                sites
            }
        }
    }

    fn label(&self) -> String {
        match self {
            Element::Excitation(g) => format!("exc {g}"),
            Element::Ry(q) => format!("ry {q}"),
            Element::Cnot(c, t) => format!("cnot {c} {t}"),
            Element::OrbitalRotation(n) => format!("orb {n}"),
            Element::Jastrow(pairs) => {
                let p: Vec<String> = pairs.iter().map(|(i, j)| format!("{i}-{j}")).collect();
                format!("jastrow {}", p.join(","))
            }
        }
    }
}

fn rotation_sites(image: &PauliSum) -> Vec<GateSite> {
    let mut sites = Vec::new();
    for (p, _) in image.terms() {
        let support: Vec<(usize, Axis)> = p.axes().collect();
        for &(q, a) in &support {
            if a != Axis::Z {
                sites.push(GateSite::One(q));
            }
        }
        for w in support.windows(2) {
            sites.push(GateSite::Two(w[0].0, w[1].0));
        }
        if let Some(&(last, _)) = support.last() {
            sites.push(GateSite::One(last));
        }
        for w in support.windows(2).rev() {
            sites.push(GateSite::Two(w[0].0, w[1].0));
        }
        for &(q, a) in &support {
            if a != Axis::Z {
                sites.push(GateSite::One(q));
            }
        }
    }
    sites
}

pub fn kappa_matrix(n: usize, params: &[f64]) -> DMatrix<f64> {
    let mut k = DMatrix::zeros(n, n);
    let mut idx = 0;
    for p in 0..n {
        for q in p + 1..n {
            k[(p, q)] = params[idx];
            k[(q, p)] = -params[idx];
            idx += 1;
        }
    }
    k
}

fn apply_ry(psi: &mut [Complex64], q: usize, theta: f64) {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let bit = 1usize << q;
    for b in 0..psi.len() {
        if b & bit == 0 {
            let (a0, a1) = (psi[b], psi[b | bit]);
            psi[b] = c * a0 - s * a1;
            psi[b | bit] = s * a0 + c * a1;
        }
    }
}

fn apply_cnot(psi: &mut [Complex64], c: usize, t: usize) {
    let (cb, tb) = (1usize << c, 1usize << t);
    for b in 0..psi.len() {
        if b & cb != 0 && b & tb == 0 {
            psi.swap(b, b | tb);
        }
    }
}

fn apply_jastrow(psi: &mut [Complex64], pairs: &[(usize, usize)], params: &[f64], sign: f64) {
    for (b, a) in psi.iter_mut().enumerate() {
        let occ = |p: usize| ((b >> (2 * p)) & 1) as f64 + ((b >> (2 * p + 1)) & 1) as f64;
        let phase: f64 = pairs
            .iter()
            .zip(params)
            .map(|(&(i, j), &v)| v * occ(i) * occ(j))
            .sum();
        if phase != 0.0 {
            *a *= Complex64::from_polar(1.0, sign * phase);
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GateCounts {
    pub one_qubit: usize,
    pub two_qubit: usize,
    pub elements: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzCircuit {
    pub kind: AnsatzKind,
    pub n_qubits: usize,
    pub n_electrons: usize,
    pub elements: Vec<Element>,
    pub params: Vec<f64>,
}

impl AnsatzCircuit {
    pub fn new(kind: AnsatzKind, n_qubits: usize, n_electrons: usize) -> Self {
        Self {
            kind,
            n_qubits,
            n_electrons,
            elements: Vec::new(),
            params: Vec::new(),
        }
    }

    pub fn push(&mut self, element: Element, init: &[f64]) {
        debug_assert_eq!(element.n_params(), init.len());
        self.elements.push(element);
        self.params.extend_from_slice(init);
    }

    pub fn n_params(&self) -> usize {
        self.params.len()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Hartree–Fock for chemistry-inspired circuits, `|0…0⟩` for HEA.
    pub fn reference(&self) -> Statevector {
        match self.kind {
            AnsatzKind::Hea => Statevector::zero(self.n_qubits),
            _ => hartree_fock_state(self.n_qubits, self.n_electrons),
        }
    }

    pub fn apply_with(&self, psi: &mut [Complex64], params: &[f64]) {
        let mut off = 0;
        for e in &self.elements {
            let k = e.n_params();
            e.apply(psi, &params[off..off + k]);
            off += k;
        }
    }

    pub fn apply_inverse_with(&self, psi: &mut [Complex64], params: &[f64]) {
        let mut off = params.len();
        for e in self.elements.iter().rev() {
            let k = e.n_params();
            off -= k;
            e.apply_inverse(psi, &params[off..off + k]);
        }
    }

    /// `U(θ)` applied to `initial`.
    pub fn state_from(&self, initial: &Statevector, params: &[f64]) -> Statevector {
        let mut s = initial.clone();
        self.apply_with(s.amplitudes_mut(), params);
        s
    }

    pub fn state(&self) -> Statevector {
        self.state_from(&self.reference(), &self.params)
    }

    pub fn energy(&self, h: &SparseOperator, params: &[f64]) -> f64 {
        let s = self.state_from(&self.reference(), params);
        h.expectation(&s).expect("register sizes agree")
    }

    /// True when every parameterized element has an analytic adjoint derivative.
    pub fn has_adjoint_gradient(&self) -> bool {
        self.elements.iter().all(|e| {
            matches!(
                e,
                Element::Excitation(_) | Element::Ry(_) | Element::Cnot(..)
            )
        })
    }

    /// Energy and its gradient by reverse-mode sweeps.
    pub fn energy_and_gradient(
        &self,
        h: &SparseOperator,
        params: &[f64],
    ) -> Option<(f64, Vec<f64>)> {
        if !self.has_adjoint_gradient() {
            return None;
        }
        let mut psi = self.reference().into_amplitudes();
        self.apply_with(&mut psi, params);
        let mut lam = h.apply(&psi);
        let energy: f64 = psi.iter().zip(&lam).map(|(a, b)| (a.conj() * b).re).sum();
        let mut grad = vec![0.0; params.len()];
        let mut tmp = vec![Complex64::new(0.0, 0.0); psi.len()];
        let mut off = params.len();
        for e in self.elements.iter().rev() {
            let k = e.n_params();
            off -= k;
            match e {
                Element::Excitation(g) => {
                    apply_anti_hermitian(&psi, g, &mut tmp);
                    grad[off] = 2.0
                        * lam
                            .iter()
                            .zip(&tmp)
                            .map(|(l, t)| (l.conj() * t).re)
                            .sum::<f64>();
                }
                Element::Ry(q) => {
                    // A = −iY/2, and −iY maps |0⟩ → |1⟩, |1⟩ → −|0⟩.
                    let bit = 1usize << q;
                    let mut acc = 0.0;
                    for b in 0..psi.len() {
                        let v = if b & bit == 0 {
                            -psi[b | bit]
                        } else {
                            psi[b ^ bit]
                        };
                        acc += (lam[b].conj() * v * 0.5).re;
                    }
                    grad[off] = 2.0 * acc;
                }
                _ => {}
            }
            e.apply_inverse(&mut psi, &params[off..off + k]);
            e.apply_inverse(&mut lam, &params[off..off + k]);
        }
        Some((energy, grad))
    }

    pub fn gate_counts(&self) -> GateCounts {
        let mut c = GateCounts {
            elements: self.elements.len(),
            ..Default::default()
        };
        for e in &self.elements {
            for s in e.gate_sites(self.n_qubits) {
                match s {
                    GateSite::One(_) => c.one_qubit += 1,
                    GateSite::Two(..) => c.two_qubit += 1,
                }
            }
        }
        c
    }

    /// Line-oriented text form; parameters use shortest round-trip formatting.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "kind {}", self.kind.name());
        let _ = writeln!(s, "qubits {}", self.n_qubits);
        let _ = writeln!(s, "electrons {}", self.n_electrons);
        let mut off = 0;
        for e in &self.elements {
            let k = e.n_params();
            let vals: Vec<String> = self.params[off..off + k]
                .iter()
                .map(|v| format!("{v:?}"))
                .collect();
            off += k;
            if vals.is_empty() {
                let _ = writeln!(s, "{}", e.label());
            } else {
                let _ = writeln!(s, "{} : {}", e.label(), vals.join(" "));
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |l: &str| Error::Parse(format!("bad ansatz line '{l}'"));
        let mut kind = None;
        let mut nq = None;
        let mut ne = None;
        let mut circ_elems = Vec::new();
        let mut params = Vec::new();
        for line in text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
        {
            let (head, vals) = match line.split_once(':') {
                Some((h, v)) => (h.trim(), v.trim()),
                None => (line, ""),
            };
            let mut it = head.split_whitespace();
            let tag = it.next().ok_or_else(|| bad(line))?;
            let rest: Vec<&str> = it.collect();
            let num = |i: usize| -> Result<usize> {
                rest.get(i)
                    .and_then(|x| x.parse().ok())
                    .ok_or_else(|| bad(line))
            };
            let element = match tag {
                "kind" => {
                    kind = Some(AnsatzKind::parse(rest.first().ok_or_else(|| bad(line))?)?);
                    continue;
                }
                "qubits" => {
                    nq = Some(num(0)?);
                    continue;
                }
                "electrons" => {
                    ne = Some(num(0)?);
                    continue;
                }
                "exc" => Element::Excitation(FermionGenerator::parse(
                    rest.first().ok_or_else(|| bad(line))?,
                )?),
                "ry" => Element::Ry(num(0)?),
                "cnot" => Element::Cnot(num(0)?, num(1)?),
                "orb" => Element::OrbitalRotation(num(0)?),
                "jastrow" => {
                    let field = rest.first().ok_or_else(|| bad(line))?;
                    let pairs = field
                        .split(',')
                        .map(|p| {
                            let (a, b) = p.split_once('-').ok_or_else(|| bad(line))?;
                            Ok((
                                a.parse().map_err(|_| bad(line))?,
                                b.parse().map_err(|_| bad(line))?,
                            ))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Element::Jastrow(pairs)
                }
                _ => return Err(bad(line)),
            };
            let v: Vec<f64> = vals
                .split_whitespace()
                .map(|x| x.parse::<f64>().map_err(|_| bad(line)))
                .collect::<Result<_>>()?;
            if v.len() != element.n_params() {
                return Err(bad(line));
            }
            params.extend(v);
            circ_elems.push(element);
        }
        let missing = |f: &str| Error::Parse(format!("ansatz text lacks '{f}'"));
        Ok(Self {
            kind: kind.ok_or_else(|| missing("kind"))?,
            n_qubits: nq.ok_or_else(|| missing("qubits"))?,
            n_electrons: ne.ok_or_else(|| missing("electrons"))?,
            elements: circ_elems,
            params,
        })
    }
}

/// An ansatz circuit acting on a prepared initial state, as a noisy program:
/// step 0 is state preparation, step `k` is element `k − 1`.
pub struct CircuitProgram<'a> {
    pub circuit: &'a AnsatzCircuit,
    pub initial: Statevector,
    sites: Vec<Vec<GateSite>>,
    offsets: Vec<usize>,
}

impl<'a> CircuitProgram<'a> {
    pub fn new(
        circuit: &'a AnsatzCircuit,
        initial: Statevector,
        prep_sites: Vec<GateSite>,
    ) -> Self {
        let mut sites = vec![prep_sites];
        let mut offsets = Vec::new();
        let mut off = 0;
        for e in &circuit.elements {
            sites.push(e.gate_sites(circuit.n_qubits));
            offsets.push(off);
            off += e.n_params();
        }
        Self {
            circuit,
            initial,
            sites,
            offsets,
        }
    }
}

impl NoisyProgram for CircuitProgram<'_> {
    fn initial(&self) -> Statevector {
        self.initial.clone()
    }

    fn n_steps(&self) -> usize {
        self.sites.len()
    }

    fn apply_step(&self, step: usize, psi: &mut [Complex64]) {
        if step == 0 {
            return;
        }
        let e = &self.circuit.elements[step - 1];
        let off = self.offsets[step - 1];
        e.apply(psi, &self.circuit.params[off..off + e.n_params()]);
    }

    fn sites(&self, step: usize) -> &[GateSite] {
        &self.sites[step]
    }
}

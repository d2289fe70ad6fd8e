//! Pauli strings over up to 64 qubits and weighted sums of them.
//!
//! A string is stored as an X mask and a Z mask; qubit `q` carries
//! `I` (0,0), `X` (1,0), `Z` (0,1) or `Y` (1,1). The operator represented is the
//! tensor product of the single-qubit Paulis, so `Y = i·X·Z` on each qubit.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Terms with a coefficient magnitude below this are dropped on simplification.
pub const PRUNE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn symbol(self) -> char {
        match self {
            Axis::X => 'X',
            Axis::Y => 'Y',
            Axis::Z => 'Z',
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Axis::X => (true, false),
            Axis::Y => (true, true),
            Axis::Z => (false, true),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PauliString {
    pub x: u64,
    pub z: u64,
}

#[inline]
fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl PauliString {
    pub const IDENTITY: PauliString = PauliString { x: 0, z: 0 };

    pub fn new(x: u64, z: u64) -> Self {
        Self { x, z }
    }

    pub fn single(qubit: usize, axis: Axis) -> Self {
        Self::from_axes(&[(qubit, axis)])
    }

    pub fn from_axes(axes: &[(usize, Axis)]) -> Self {
        let mut p = Self::IDENTITY;
        for &(q, a) in axes {
            let (bx, bz) = a.bits();
            if bx {
                p.x |= 1 << q;
            }
            if bz {
                p.z |= 1 << q;
            }
        }
        p
    }

    pub fn axis(&self, qubit: usize) -> Option<Axis> {
        match ((self.x >> qubit) & 1, (self.z >> qubit) & 1) {
            (0, 0) => None,
            (1, 0) => Some(Axis::X),
            (1, 1) => Some(Axis::Y),
            _ => Some(Axis::Z),
        }
    }

    /// Non-identity axes in ascending qubit order.
    pub fn axes(&self) -> impl Iterator<Item = (usize, Axis)> + '_ {
        let support = self.support();
        (0..64)
            .filter(move |q| (support >> q) & 1 == 1)
            .map(move |q| (q, self.axis(q).unwrap()))
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn weight(&self) -> u32 {
        self.support().count_ones()
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// True when the string only contains `I` and `Z`.
    pub fn is_diagonal(&self) -> bool {
        self.x == 0
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    /// Qubit-wise compatibility: on every shared qubit the axes agree.
    pub fn qubitwise_compatible(&self, other: &PauliString) -> bool {
        let shared = self.support() & other.support();
        (self.x ^ other.x) & shared == 0 && (self.z ^ other.z) & shared == 0
    }

    /// Product `self · other = phase · result`.
    pub fn mul(&self, other: &PauliString) -> (Complex64, PauliString) {
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        // P = i^{|x&z|} X^x Z^z, and Z^a X^b = (-1)^{|a&b|} X^b Z^a.
        let k = (self.x & self.z).count_ones()
            + (other.x & other.z).count_ones()
            + 2 * (self.z & other.x).count_ones()
            + 4 * 64
            - (x & z).count_ones();
        (i_pow(k), PauliString { x, z })
    }

    /// Action on a computational basis state: `P|b⟩ = phase · |b'⟩`.
    #[inline]
    pub fn apply_to_basis(&self, b: u64) -> (Complex64, u64) {
        let k = (self.x & self.z).count_ones() + 2 * (self.z & b).count_ones();
        (i_pow(k), b ^ self.x)
    }

    pub fn label(&self) -> String {
        if self.is_identity() {
            return "I".to_string();
        }
        self.axes()
            .map(|(q, a)| format!("{}{}", a.symbol(), q))
            .collect()
    }

    pub fn parse(label: &str) -> Result<Self> {
        let label = label.trim();
        if label == "I" || label.is_empty() {
            return Ok(Self::IDENTITY);
        }
        let mut axes = Vec::new();
        let chars: Vec<char> = label.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let axis = match chars[i] {
                'X' => Axis::X,
                'Y' => Axis::Y,
                'Z' => Axis::Z,
                c => {
                    return Err(Error::Parse(format!(
                        "unexpected '{c}' in Pauli label {label}"
                    )))
                }
            };
            i += 1;
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let q: usize = chars[start..i]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| Error::Parse(format!("missing qubit index in {label}")))?;
            if q >= 64 {
                return Err(Error::IndexOutOfRange {
                    index: q,
                    limit: 64,
                });
            }
            axes.push((q, axis));
        }
        Ok(Self::from_axes(&axes))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A complex-weighted sum of Pauli strings on a fixed number of qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: BTreeMap<PauliString, Complex64>,
}

impl PauliSum {
    pub fn zero(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n_qubits: usize, coeff: f64) -> Self {
        let mut s = Self::zero(n_qubits);
        s.add_term(PauliString::IDENTITY, Complex64::new(coeff, 0.0));
        s
    }

    pub fn from_terms(
        n_qubits: usize,
        terms: impl IntoIterator<Item = (PauliString, Complex64)>,
    ) -> Self {
        let mut s = Self::zero(n_qubits);
        for (p, c) in terms {
            s.add_term(p, c);
        }
        s.simplify();
        s
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PauliString, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, p: &PauliString) -> Complex64 {
        self.terms.get(p).copied().unwrap_or_default()
    }

    /// Adds without pruning; call [`simplify`](Self::simplify) afterwards.
    pub fn add_term(&mut self, p: PauliString, c: Complex64) {
        debug_assert!(p.support() >> self.n_qubits == 0 || self.n_qubits >= 64);
        *self.terms.entry(p).or_default() += c;
    }

    pub fn simplify(&mut self) {
        self.terms.retain(|_, c| c.norm() >= PRUNE_TOLERANCE);
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= factor;
        }
        out.simplify();
        out
    }

    pub fn add(&self, other: &PauliSum) -> Self {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(*p, *c);
        }
        out.simplify();
        out
    }

    pub fn sub(&self, other: &PauliSum) -> Self {
        self.add(&other.scaled(Complex64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &PauliSum) -> Self {
        let mut out = Self::zero(self.n_qubits.max(other.n_qubits));
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                let (phase, r) = p.mul(q);
                out.add_term(r, phase * a * b);
            }
        }
        out.simplify();
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.conj();
        }
        out
    }

    pub fn commutator(&self, other: &PauliSum) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.im.abs() <= tol)
    }

    pub fn is_anti_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.re.abs() <= tol)
    }

    /// Coefficient of the identity string (real part).
    pub fn constant(&self) -> f64 {
        self.coefficient(&PauliString::IDENTITY).re
    }

    /// `out += self · psi` for a dense amplitude vector.
    pub fn apply_into(&self, psi: &[Complex64], out: &mut [Complex64]) {
        for (p, c) in &self.terms {
            for (b, amp) in psi.iter().enumerate() {
                if amp.re == 0.0 && amp.im == 0.0 {
                    continue;
                }
                let (phase, b2) = p.apply_to_basis(b as u64);
                out[b2 as usize] += c * phase * amp;
            }
        }
    }

    /// Dense matrix, for checks on small systems.
    pub fn to_dense(&self) -> nalgebra::DMatrix<Complex64> {
        let dim = 1usize << self.n_qubits;
        let mut m = nalgebra::DMatrix::zeros(dim, dim);
        for (p, c) in &self.terms {
            for b in 0..dim {
                let (phase, b2) = p.apply_to_basis(b as u64);
                m[(b2 as usize, b)] += c * phase;
            }
        }
        m
    }

    /// Line-oriented text form: `coefficient axes`, one term per line.
    /// Real coefficients are written bare; complex ones as `(re,im)`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (p, c) in &self.terms {
            if c.im == 0.0 {
                s.push_str(&format!("{:e} {}\n", c.re, p));
            } else {
                s.push_str(&format!("({:e},{:e}) {}\n", c.re, c.im, p));
            }
        }
        s
    }

    pub fn from_text(n_qubits: usize, text: &str) -> Result<Self> {
        let mut out = Self::zero(n_qubits);
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (coef, label) = line
                .split_once(char::is_whitespace)
                .ok_or_else(|| Error::Parse(format!("bad Pauli term line '{line}'")))?;
            let c = parse_coefficient(coef)?;
            let p = PauliString::parse(label)?;
            if p.support() >> n_qubits != 0 && n_qubits < 64 {
                return Err(Error::IndexOutOfRange {
                    index: 63 - p.support().leading_zeros() as usize,
                    limit: n_qubits,
                });
            }
            out.add_term(p, c);
        }
        out.simplify();
        Ok(out)
    }
}

fn parse_coefficient(s: &str) -> Result<Complex64> {
    let bad = || Error::Parse(format!("bad coefficient '{s}'"));
    if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        let (re, im) = inner.split_once(',').ok_or_else(bad)?;
        Ok(Complex64::new(
            re.parse().map_err(|_| bad())?,
            im.parse().map_err(|_| bad())?,
        ))
    } else {
        Ok(Complex64::new(s.parse().map_err(|_| bad())?, 0.0))
    }
}

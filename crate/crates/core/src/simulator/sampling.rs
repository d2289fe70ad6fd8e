//! Measurement-basis changes, shot sampling, readout noise and histogram estimates.
//!
//! Bitstrings are integers with qubit 0 as the least-significant bit; printed
//! bitstrings put qubit 0 rightmost.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;

use super::noise::NoiseModel;
use super::Statevector;
use crate::error::{Error, Result};
use crate::operators::{Axis, PauliSum};

/// Per-qubit measurement axis; `None` is measured in Z like `Some(Axis::Z)`.
pub type BasisPattern = Vec<Option<Axis>>;

/// Maps X (via H) and Y (via S† then H) eigenstates onto the computational basis.
pub fn rotate_to_basis(psi: &mut [Complex64], pattern: &[Option<Axis>]) {
    let s_dag = Complex64::new(0.0, -1.0);
    for (q, axis) in pattern.iter().enumerate() {
        let bit = 1usize << q;
        match axis {
            Some(Axis::X) => hadamard(psi, bit),
            Some(Axis::Y) => {
                for (b, a) in psi.iter_mut().enumerate() {
                    if b & bit != 0 {
                        *a *= s_dag;
                    }
                }
                hadamard(psi, bit);
            }
            _ => {}
        }
    }
}

fn hadamard(psi: &mut [Complex64], bit: usize) {
    for b in 0..psi.len() {
        if b & bit == 0 {
            let (a0, a1) = (psi[b], psi[b | bit]);
            psi[b] = (a0 + a1) * FRAC_1_SQRT_2;
            psi[b | bit] = (a0 - a1) * FRAC_1_SQRT_2;
        }
    }
}

/// Outcome probabilities after the basis change.
pub fn exact_distribution(state: &Statevector, pattern: &[Option<Axis>]) -> Vec<f64> {
    let mut psi = state.amplitudes().to_vec();
    rotate_to_basis(&mut psi, pattern);
    psi.iter().map(|a| a.norm_sqr()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountsHistogram {
    pub n_qubits: usize,
    pub counts: BTreeMap<u64, u64>,
    pub shots: u64,
}

impl CountsHistogram {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            counts: BTreeMap::new(),
            shots: 0,
        }
    }

    pub fn record(&mut self, bits: u64) {
        *self.counts.entry(bits).or_default() += 1;
        self.shots += 1;
    }

    pub fn merge(&mut self, other: &CountsHistogram) {
        for (&b, &c) in &other.counts {
            *self.counts.entry(b).or_default() += c;
        }
        self.shots += other.shots;
    }

    pub fn to_quasi(&self) -> QuasiDistribution {
        let total = self.shots.max(1) as f64;
        QuasiDistribution {
            n_qubits: self.n_qubits,
            probs: self
                .counts
                .iter()
                .map(|(&b, &c)| (b, c as f64 / total))
                .collect(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "# qubit 0 is the rightmost character of each bitstring\nbitstring,count\n",
        );
        for (b, c) in &self.counts {
            s.push_str(&format!("{},{c}\n", bitstring(*b, self.n_qubits)));
        }
        s
    }
}

/// Probabilities that may be negative after mitigation.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiDistribution {
    pub n_qubits: usize,
    pub probs: BTreeMap<u64, f64>,
}

impl QuasiDistribution {
    pub fn from_dense(n_qubits: usize, probs: &[f64]) -> Self {
        Self {
            n_qubits,
            probs: probs
                .iter()
                .enumerate()
                .filter(|(_, p)| **p != 0.0)
                .map(|(b, &p)| (b as u64, p))
                .collect(),
        }
    }

    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut v = vec![0.0; 1 << self.n_qubits];
        for (&b, &p) in &self.probs {
            v[b as usize] = p;
        }
        v
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "# qubit 0 is the rightmost character of each bitstring\nbitstring,quasi_probability\n",
        );
        for (b, p) in &self.probs {
            s.push_str(&format!("{},{p:.12e}\n", bitstring(*b, self.n_qubits)));
        }
        s
    }
}

pub fn bitstring(b: u64, n: usize) -> String {
    (0..n)
        .rev()
        .map(|q| if b >> q & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Inverse-CDF sampler over a fixed distribution.
#[derive(Debug, Clone)]
pub struct Sampler {
    cdf: Vec<f64>,
}

impl Sampler {
    pub fn new(probs: &[f64]) -> Self {
        let mut acc = 0.0;
        let cdf = probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Self { cdf }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let total = *self.cdf.last().unwrap_or(&1.0);
        let u = rng.gen::<f64>() * total;
        let idx = self.cdf.partition_point(|&c| c <= u);
        idx.min(self.cdf.len() - 1) as u64
    }
}

/// Flips each qubit independently with its readout error probability.
pub fn readout_flip<R: Rng + ?Sized>(bits: u64, eps: &[f64], rng: &mut R) -> u64 {
    let mut out = bits;
    for (q, &e) in eps.iter().enumerate() {
        if e > 0.0 && rng.gen::<f64>() < e {
            out ^= 1 << q;
        }
    }
    out
}

/// Shot sampling in the given basis with readout noise. Gate noise needs a
/// circuit; see `noise::sample_noisy`.
pub fn sample_counts<R: Rng + ?Sized>(
    state: &Statevector,
    pattern: &[Option<Axis>],
    shots: u64,
    noise: &NoiseModel,
    rng: &mut R,
) -> CountsHistogram {
    let sampler = Sampler::new(&exact_distribution(state, pattern));
    let eps = noise.readout_for(state.n_qubits());
    let mut hist = CountsHistogram::new(state.n_qubits());
    for _ in 0..shots {
        let b = sampler.draw(rng);
        hist.record(readout_flip(b, &eps, rng));
    }
    hist
}

/// Exact effect of symmetric readout flips on a probability vector.
pub fn apply_readout_noise(probs: &[f64], eps: &[f64]) -> Vec<f64> {
    let mut p = probs.to_vec();
    for (q, &e) in eps.iter().enumerate() {
        if e == 0.0 {
            continue;
        }
        let bit = 1usize << q;
        for b in 0..p.len() {
            if b & bit == 0 {
                let (p0, p1) = (p[b], p[b | bit]);
                p[b] = (1.0 - e) * p0 + e * p1;
                p[b | bit] = e * p0 + (1.0 - e) * p1;
            }
        }
    }
    p
}

/// `Σ_ℓ c_ℓ Σ_b p(b)(−1)^{|b ∧ z_ℓ|}` for I/Z-only terms.
pub fn estimate_from_quasi(dist: &QuasiDistribution, diagonal_terms: &PauliSum) -> Result<f64> {
    let terms = diagonal_real_terms(diagonal_terms)?;
    let mut total = 0.0;
    for (&b, &p) in &dist.probs {
        total += p * diagonal_value(&terms, b);
    }
    Ok(total)
}

pub fn estimate_from_counts(counts: &CountsHistogram, diagonal_terms: &PauliSum) -> Result<f64> {
    estimate_from_quasi(&counts.to_quasi(), diagonal_terms)
}

pub fn diagonal_real_terms(terms: &PauliSum) -> Result<Vec<(u64, f64)>> {
    terms
        .terms()
        .map(|(p, c)| {
            if p.is_diagonal() {
                Ok((p.z, c.re))
            } else {
                Err(Error::NotDiagonal(p.label()))
            }
        })
        .collect()
}

#[inline]
pub fn diagonal_value(terms: &[(u64, f64)], b: u64) -> f64 {
    terms
        .iter()
        .map(|&(z, c)| if (z & b).count_ones().is_multiple_of(2) { c } else { -c })
        .sum()
}

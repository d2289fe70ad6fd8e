//! Depolarizing gate noise as Monte-Carlo Pauli insertion, and readout noise.

use num_complex::Complex64;
use rand::Rng;

use super::sampling::{
    exact_distribution, readout_flip, rotate_to_basis, CountsHistogram, Sampler,
};
use super::Statevector;
use crate::error::{Error, Result};
use crate::operators::{Axis, PauliString};

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    pub depol_1q: f64,
    pub depol_2q: f64,
    /// Per-qubit symmetric flip probability. A single entry applies to every
    /// qubit; an empty list means no readout noise.
    pub readout_eps: Vec<f64>,
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        Self {
            depol_1q: 0.0,
            depol_2q: 0.0,
            readout_eps: Vec::new(),
        }
    }

    pub fn readout(eps: f64) -> Self {
        Self {
            readout_eps: vec![eps],
            ..Self::noiseless()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for p in [self.depol_1q, self.depol_2q] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidProbability(p));
            }
        }
        for &e in &self.readout_eps {
            if !(0.0..=0.5).contains(&e) {
                return Err(Error::InvalidProbability(e));
            }
        }
        Ok(())
    }

    pub fn readout_for(&self, n_qubits: usize) -> Vec<f64> {
        match self.readout_eps.len() {
            0 => vec![0.0; n_qubits],
            1 => vec![self.readout_eps[0]; n_qubits],
            _ => (0..n_qubits)
                .map(|q| self.readout_eps.get(q).copied().unwrap_or(0.0))
                .collect(),
        }
    }

    pub fn has_gate_noise(&self) -> bool {
        self.depol_1q > 0.0 || self.depol_2q > 0.0
    }

    pub fn has_readout_noise(&self) -> bool {
        self.readout_eps.iter().any(|&e| e > 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateSite {
    One(usize),
    Two(usize, usize),
}

const AXES: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

/// A uniformly random non-identity Pauli on the site's qubits.
pub fn random_site_pauli<R: Rng + ?Sized>(site: GateSite, rng: &mut R) -> PauliString {
    match site {
        GateSite::One(q) => PauliString::single(q, AXES[rng.gen_range(0..3)]),
        GateSite::Two(a, b) => {
            let k = rng.gen_range(1..16usize);
            let mut axes = Vec::new();
            if k % 4 != 0 {
                axes.push((a, AXES[k % 4 - 1]));
            }
            if k / 4 != 0 {
                axes.push((b, AXES[k / 4 - 1]));
            }
            PauliString::from_axes(&axes)
        }
    }
}

pub fn apply_pauli(psi: &mut [Complex64], p: &PauliString) {
    if p.x == 0 {
        for (b, a) in psi.iter_mut().enumerate() {
            if (p.z & b as u64).count_ones() % 2 == 1 {
                *a = -*a;
            }
        }
        return;
    }
    let top = 63 - p.x.leading_zeros();
    for b in 0..psi.len() as u64 {
        if b >> top & 1 == 1 {
            continue;
        }
        let b2 = b ^ p.x;
        let (ph1, _) = p.apply_to_basis(b);
        let (ph2, _) = p.apply_to_basis(b2);
        let (a1, a2) = (psi[b as usize], psi[b2 as usize]);
        psi[b2 as usize] = ph1 * a1;
        psi[b as usize] = ph2 * a2;
    }
}

/// With probability `p`, applies a random non-identity Pauli on the site.
pub fn apply_depolarizing<R: Rng + ?Sized>(
    state: &mut Statevector,
    site: GateSite,
    p: f64,
    rng: &mut R,
) -> Result<Option<PauliString>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    if p == 0.0 || rng.gen::<f64>() >= p {
        return Ok(None);
    }
    let pauli = random_site_pauli(site, rng);
    apply_pauli(state.amplitudes_mut(), &pauli);
    Ok(Some(pauli))
}

/// A state preparation broken into steps, each followed by gate sites where
/// depolarizing errors may strike.
pub trait NoisyProgram: Sync {
    fn initial(&self) -> Statevector;
    fn n_steps(&self) -> usize;
    fn apply_step(&self, step: usize, psi: &mut [Complex64]);
    fn sites(&self, step: usize) -> &[GateSite];
}

/// Trajectory sampling: each shot draws its own error pattern. Shots without an
/// error reuse the noiseless outcome distribution.
pub fn sample_noisy<P: NoisyProgram + ?Sized, R: Rng + ?Sized>(
    program: &P,
    pattern: &[Option<Axis>],
    shots: u64,
    noise: &NoiseModel,
    rng: &mut R,
) -> CountsHistogram {
    let mut ideal = program.initial();
    for k in 0..program.n_steps() {
        program.apply_step(k, ideal.amplitudes_mut());
    }
    let n = ideal.n_qubits();
    let sampler = Sampler::new(&exact_distribution(&ideal, pattern));
    let eps = noise.readout_for(n);
    let mut hist = CountsHistogram::new(n);

    let mut sites: Vec<(usize, GateSite)> = Vec::new();
    if noise.has_gate_noise() {
        for k in 0..program.n_steps() {
            sites.extend(program.sites(k).iter().map(|s| (k, *s)));
        }
        for (q, axis) in pattern.iter().enumerate() {
            let gates = match axis {
                Some(Axis::X) => 1,
                Some(Axis::Y) => 2,
                _ => 0,
            };
            for _ in 0..gates {
                sites.push((program.n_steps(), GateSite::One(q)));
            }
        }
    }

    let mut errors: Vec<(usize, PauliString)> = Vec::new();
    for _ in 0..shots {
        errors.clear();
        for &(k, site) in &sites {
            let p = match site {
                GateSite::One(_) => noise.depol_1q,
                GateSite::Two(..) => noise.depol_2q,
            };
            if p > 0.0 && rng.gen::<f64>() < p {
                errors.push((k, random_site_pauli(site, rng)));
            }
        }
        let b = if errors.is_empty() {
            sampler.draw(rng)
        } else {
            let mut psi = program.initial().into_amplitudes();
            let mut e = 0;
            for k in 0..program.n_steps() {
                program.apply_step(k, &mut psi);
                while e < errors.len() && errors[e].0 == k {
                    apply_pauli(&mut psi, &errors[e].1);
                    e += 1;
                }
            }
            rotate_to_basis(&mut psi, pattern);
            for (_, p) in &errors[e..] {
                apply_pauli(&mut psi, p);
            }
            let u: f64 = rng.gen();
            let mut acc = 0.0;
            let mut pick = psi.len() - 1;
            for (i, a) in psi.iter().enumerate() {
                acc += a.norm_sqr();
                if u < acc {
                    pick = i;
                    break;
                }
            }
            pick as u64
        };
        hist.record(readout_flip(b, &eps, rng));
    }
    hist
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::PauliSum;
    use crate::simulator::sampling::estimate_from_counts;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_probability_never_fires() {
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut s = Statevector::basis(2, 1);
            assert_eq!(
                apply_depolarizing(&mut s, GateSite::Two(0, 1), 0.0, &mut rng).unwrap(),
                None
            );
            assert_eq!(s, Statevector::basis(2, 1));
        }
    }

    #[test]
    fn full_depolarizing_on_zero_gives_minus_third() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 30_000;
        let mut total = 0.0;
        for _ in 0..n {
            let mut s = Statevector::zero(1);
            apply_depolarizing(&mut s, GateSite::One(0), 1.0, &mut rng).unwrap();
            total += s.amplitudes()[0].norm_sqr() - s.amplitudes()[1].norm_sqr();
        }
        let mean = total / n as f64;
        // Each trajectory gives ±1; the standard error is below 0.006.
        assert!((mean + 1.0 / 3.0).abs() < 0.03, "{mean}");
    }

    #[test]
    fn invalid_probability() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut s = Statevector::zero(1);
        assert!(apply_depolarizing(&mut s, GateSite::One(0), 1.5, &mut rng).is_err());
        assert!(NoiseModel::readout(0.6).validate().is_err());
    }

    #[test]
    fn two_qubit_paulis_are_uniform_and_non_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..2000 {
            let p = random_site_pauli(GateSite::Two(0, 3), &mut rng);
            assert!(!p.is_identity());
            assert_eq!(p.support() & !0b1001, 0);
            seen.insert(p);
        }
        assert_eq!(seen.len(), 15);
    }

    struct Flip;
    impl NoisyProgram for Flip {
        fn initial(&self) -> Statevector {
            Statevector::zero(2)
        }
        fn n_steps(&self) -> usize {
            1
        }
        fn apply_step(&self, _: usize, psi: &mut [Complex64]) {
            apply_pauli(psi, &PauliString::parse("X0").unwrap());
        }
        fn sites(&self, _: usize) -> &[GateSite] {
            &[GateSite::Two(0, 1)]
        }
    }

    #[test]
    fn noisy_sampling_degrades_expectation() {
        let z = PauliSum::from_text(2, "1.0 Z0\n1.0 Z1").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let clean = sample_noisy(
            &Flip,
            &[None, None],
            5000,
            &NoiseModel::noiseless(),
            &mut rng,
        );
        assert_eq!(estimate_from_counts(&clean, &z).unwrap(), 0.0);
        let noise = NoiseModel {
            depol_2q: 0.5,
            ..NoiseModel::noiseless()
        };
        let noisy = sample_noisy(&Flip, &[None, None], 20000, &noise, &mut rng);
        // Z0 Z1 expectation for |01⟩ (qubit 0 set) is −1 + 1 = 0 exactly; check
        // the flipped-qubit marginal instead.
        let z0 = PauliSum::from_text(2, "1.0 Z0").unwrap();
        let e = estimate_from_counts(&noisy, &z0).unwrap();
        // 8 of 15 two-qubit Paulis flip qubit 0: ⟨Z0⟩ = −1 + 2·0.5·8/15.
        assert!((e - (-1.0 + 8.0 / 15.0)).abs() < 0.03, "{e}");
    }
}

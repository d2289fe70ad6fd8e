//! Basis-rotation grouping: a low-rank factorization of the two-electron
//! tensor in which every piece becomes diagonal after an orbital rotation.
//!
//! With `E_pq = Σ_σ a†_pσ a_qσ` the Hamiltonian is
//! `E_core + Σ h̃_pq E_pq + ½ Σ_r w_r (Σ_pq L^(r)_pq E_pq)²` where
//! `h̃_ps = h_ps − ½ Σ_q g_pqqs` collects the one-body remainder of
//! normal ordering and `g_pqrs = Σ_r w_r L^(r)_pq L^(r)_rs`.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chem::MolecularIntegrals;
use crate::error::{Error, Result};
use crate::linalg::{asymmetry, sym_eigh};
use crate::simulator::{
    apply_orbital_rotation, exact_distribution, sample_counts, NoiseModel, Statevector,
};

/// One retained rank: `w · (Σ_i λ_i ñ_i)²` in the orbitals `rotation`.
#[derive(Debug, Clone, PartialEq)]
pub struct BrgRank {
    pub weight: f64,
    pub rotation: DMatrix<f64>,
    pub lambdas: Vec<f64>,
}

impl BrgRank {
    /// `L = U diag(λ) Uᵀ`.
    pub fn l_matrix(&self) -> DMatrix<f64> {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.lambdas));
        &self.rotation * d * self.rotation.transpose()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BrgFactorization {
    pub n_spatial: usize,
    pub core_energy: f64,
    pub one_body_rotation: DMatrix<f64>,
    pub one_body_eigenvalues: Vec<f64>,
    pub ranks: Vec<BrgRank>,
    pub tolerance: f64,
}

/// Eigenvalues this far below the largest are numerical zeros even at tolerance 0.
const RANK_FLOOR: f64 = 1e-12;

pub fn brg_factorize(ints: &MolecularIntegrals, tolerance: f64) -> Result<BrgFactorization> {
    let n = ints.n_spatial;
    let nn = n * n;
    let composite = DMatrix::from_fn(nn, nn, |a, b| ints.g(a / n, a % n, b / n, b % n));
    let asym = asymmetry(&composite);
    if asym > 1e-10 {
        return Err(Error::NotSymmetric(asym));
    }
    let (vals, vecs) = sym_eigh(&composite);
    let largest = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let cut = tolerance.max(RANK_FLOOR * largest);

    // Largest magnitude first so truncated sweeps keep the dominant pieces.
    let mut order: Vec<usize> = (0..nn).filter(|&k| vals[k].abs() > cut).collect();
    order.sort_by(|&a, &b| vals[b].abs().total_cmp(&vals[a].abs()).then(a.cmp(&b)));

    let mut ranks = Vec::with_capacity(order.len());
    for k in order {
        let l = DMatrix::from_fn(n, n, |p, q| {
            0.5 * (vecs[(p * n + q, k)] + vecs[(q * n + p, k)])
        });
        let (lambdas, rotation) = sym_eigh(&l);
        ranks.push(BrgRank {
            weight: vals[k],
            rotation,
            lambdas,
        });
    }

    let h_tilde = DMatrix::from_fn(n, n, |p, s| {
        ints.h[p * n + s] - 0.5 * (0..n).map(|q| ints.g(p, q, q, s)).sum::<f64>()
    });
    let (one_body_eigenvalues, one_body_rotation) = sym_eigh(&h_tilde);
    Ok(BrgFactorization {
        n_spatial: n,
        core_energy: ints.core_energy,
        one_body_rotation,
        one_body_eigenvalues,
        ranks,
        tolerance,
    })
}

/// One group for the one-body part plus one per retained rank.
pub fn brg_group_count(f: &BrgFactorization) -> usize {
    1 + f.ranks.len()
}

impl BrgFactorization {
    pub fn rank(&self) -> usize {
        self.ranks.len()
    }

    pub fn group_count(&self) -> usize {
        brg_group_count(self)
    }

    /// `Σ_r w_r L^(r)_pq L^(r)_rs` in the same flat layout as `MolecularIntegrals::g`.
    pub fn reconstruct_g(&self) -> Vec<f64> {
        let n = self.n_spatial;
        let mut g = vec![0.0; n * n * n * n];
        for r in &self.ranks {
            let l = r.l_matrix();
            for a in 0..n * n {
                for b in 0..n * n {
                    g[a * n * n + b] += r.weight * l[(a / n, a % n)] * l[(b / n, b % n)];
                }
            }
        }
        g
    }

    pub fn reconstruction_error(&self, ints: &MolecularIntegrals) -> f64 {
        let n = self.n_spatial;
        let g = self.reconstruct_g();
        let mut worst = 0.0f64;
        for a in 0..n * n {
            for b in 0..n * n {
                worst = worst.max((g[a * n * n + b] - ints.g(a / n, a % n, b / n, b % n)).abs());
            }
        }
        worst
    }

    /// Orbital frame a group is measured in.
    pub fn group_rotation(&self, group: usize) -> &DMatrix<f64> {
        if group == 0 {
            &self.one_body_rotation
        } else {
            &self.ranks[group - 1].rotation
        }
    }

    /// Per-shot value of a group for a bitstring measured in its rotated frame.
    pub fn group_value(&self, group: usize, b: u64) -> f64 {
        let occ = |i: usize| ((b >> (2 * i)) & 1) as f64 + ((b >> (2 * i + 1)) & 1) as f64;
        if group == 0 {
            return self
                .one_body_eigenvalues
                .iter()
                .enumerate()
                .map(|(i, d)| d * occ(i))
                .sum();
        }
        let r = &self.ranks[group - 1];
        let s: f64 = r.lambdas.iter().enumerate().map(|(i, l)| l * occ(i)).sum();
        0.5 * r.weight * s * s
    }

    /// State in the frame where `group` is diagonal.
    pub fn rotate_for_group(&self, state: &Statevector, group: usize) -> Result<Statevector> {
        apply_orbital_rotation(state, &self.group_rotation(group).transpose())
    }
}

/// Energy estimate and the per-group contributions (core energy excluded).
#[derive(Debug, Clone, PartialEq)]
pub struct BrgEstimate {
    pub energy: f64,
    pub groups: Vec<f64>,
}

/// BRG energy of `state`. `shots = None` uses exact outcome probabilities;
/// otherwise each group gets `shots` samples with the model's readout flips.
pub fn brg_estimate_energy(
    state: &Statevector,
    f: &BrgFactorization,
    shots: Option<u64>,
    noise: &NoiseModel,
    seed: u64,
) -> Result<BrgEstimate> {
    if state.n_qubits() != 2 * f.n_spatial {
        return Err(Error::QubitMismatch {
            expected: 2 * f.n_spatial,
            found: state.n_qubits(),
        });
    }
    noise.validate()?;
    let z = vec![None; state.n_qubits()];
    let mut groups = Vec::with_capacity(f.group_count());
    for k in 0..f.group_count() {
        let rotated = f.rotate_for_group(state, k)?;
        let value = match shots {
            None => {
                let mut p = exact_distribution(&rotated, &z);
                if noise.has_readout_noise() {
                    p = crate::simulator::apply_readout_noise(
                        &p,
                        &noise.readout_for(state.n_qubits()),
                    );
                }
                p.iter()
                    .enumerate()
                    .map(|(b, pb)| pb * f.group_value(k, b as u64))
                    .sum()
            }
            Some(n) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(k as u64);
                let counts = sample_counts(&rotated, &z, n, noise, &mut rng);
                let total = counts.shots.max(1) as f64;
                counts
                    .counts
                    .iter()
                    .map(|(&b, &c)| c as f64 * f.group_value(k, b))
                    .sum::<f64>()
                    / total
            }
        };
        groups.push(value);
    }
    Ok(BrgEstimate {
        energy: f.core_energy + groups.iter().sum::<f64>(),
        groups,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chem::parse_fcidump;
    use crate::operators::build_hamiltonian;
    use crate::simulator::{expectation, hartree_fock_state};
    use num_complex::Complex64;

    const H2: &str = include_str!("../../../../fixtures/h2/h2_sto3g_0.740.fcidump");
    const H4: &str = include_str!("../../../../fixtures/hchain/h4_sto3g_1.500.fcidump");

    fn mixed_state(nq: usize, ne: usize) -> Statevector {
        let mut amps = hartree_fock_state(nq, ne).into_amplitudes();
        for (k, a) in amps.iter_mut().enumerate() {
            let b = k as u64;
            if b.count_ones() as usize == ne && (b & 0x5555).count_ones() as usize == ne / 2 {
                *a += Complex64::new(0.05 * ((k % 7) as f64 - 3.0), 0.02 * ((k % 5) as f64 - 2.0));
            }
        }
        let mut s = Statevector::from_amplitudes(nq, amps).unwrap();
        s.normalize();
        s
    }

    #[test]
    fn h2_keeps_three_ranks() {
        let ints = parse_fcidump(H2).unwrap();
        let f = brg_factorize(&ints, 1e-6).unwrap();
        assert_eq!(f.rank(), 3);
        assert_eq!(brg_group_count(&f), 4);
        assert!(f.reconstruction_error(&ints) < 1e-12);
    }

    #[test]
    fn full_rank_is_exact() {
        for text in [H2, H4] {
            let ints = parse_fcidump(text).unwrap();
            let f = brg_factorize(&ints, 0.0).unwrap();
            assert!(f.reconstruction_error(&ints) < 1e-12);
            let psi = mixed_state(ints.n_qubits(), ints.n_electrons);
            let exact = expectation(&psi, &build_hamiltonian(&ints).unwrap()).unwrap();
            let est = brg_estimate_energy(&psi, &f, None, &NoiseModel::noiseless(), 0).unwrap();
            assert!(
                (est.energy - exact).abs() < 1e-10,
                "{} vs {exact}",
                est.energy
            );
        }
    }

    #[test]
    fn truncation_error_within_tolerance() {
        let ints = parse_fcidump(H4).unwrap();
        for tol in [1e-6, 1e-4, 1e-2] {
            let f = brg_factorize(&ints, tol).unwrap();
            assert!(f.reconstruction_error(&ints) <= tol, "tol {tol}");
            for r in &f.ranks {
                assert!(crate::linalg::orthogonality_error(&r.rotation) < 1e-10);
            }
        }
    }

    #[test]
    fn huge_tolerance_leaves_one_body_group() {
        let ints = parse_fcidump(H4).unwrap();
        assert_eq!(brg_group_count(&brg_factorize(&ints, 1e6).unwrap()), 1);
    }

    #[test]
    fn diagonal_composite_gives_single_entry_factors() {
        let mut ints = MolecularIntegrals::zeros(2, 2, 0);
        ints.set_g_symmetric(0, 0, 0, 0, 0.7);
        ints.set_g_symmetric(1, 1, 1, 1, 0.4);
        let f = brg_factorize(&ints, 0.0).unwrap();
        assert_eq!(f.rank(), 2);
        for r in &f.ranks {
            assert_eq!(r.l_matrix().iter().filter(|v| v.abs() > 1e-12).count(), 1);
        }
    }

    #[test]
    fn hartree_fock_shots_have_no_variance_without_rotation() {
        let mut ints = MolecularIntegrals::zeros(2, 2, 0);
        ints.set_g_symmetric(0, 0, 0, 0, 0.7);
        ints.set_g_symmetric(1, 1, 1, 1, 0.4);
        ints.set_h_symmetric(0, 0, -1.0);
        ints.set_h_symmetric(1, 1, -0.5);
        let f = brg_factorize(&ints, 0.0).unwrap();
        let hf = hartree_fock_state(4, 2);
        let a = brg_estimate_energy(&hf, &f, Some(50), &NoiseModel::noiseless(), 1).unwrap();
        let b = brg_estimate_energy(&hf, &f, Some(50), &NoiseModel::noiseless(), 2).unwrap();
        let exact = brg_estimate_energy(&hf, &f, None, &NoiseModel::noiseless(), 0).unwrap();
        assert_eq!(a.energy, b.energy);
        assert!((a.energy - exact.energy).abs() < 1e-12);
    }

    #[test]
    fn tighter_tolerance_never_drops_ranks() {
        let ints = parse_fcidump(H4).unwrap();
        let counts: Vec<usize> = [1e-8, 1e-6, 1e-4, 1e-2]
            .iter()
            .map(|&t| brg_factorize(&ints, t).unwrap().rank())
            .collect();
        assert!(counts.windows(2).all(|w| w[0] >= w[1]), "{counts:?}");
    }
}

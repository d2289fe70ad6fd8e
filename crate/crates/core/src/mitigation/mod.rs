//! Readout-error correction and particle-number postselection on measured
//! distributions.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::par;
use crate::simulator::{NoiseModel, QuasiDistribution};

/// Per-qubit symmetric assignment errors `ε_q`.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentModel {
    pub eps: Vec<f64>,
}

impl AssignmentModel {
    pub fn new(eps: Vec<f64>) -> Result<Self> {
        for (q, &e) in eps.iter().enumerate() {
            if !(0.0..=0.5).contains(&e) {
                return Err(Error::InvalidProbability(e));
            }
            if e == 0.5 {
                return Err(Error::SingularAssignment(q));
            }
        }
        Ok(Self { eps })
    }

    /// Perfect calibration: the model's own readout rates.
    pub fn from_noise(noise: &NoiseModel, n_qubits: usize) -> Result<Self> {
        Self::new(noise.readout_for(n_qubits))
    }

    pub fn is_identity(&self) -> bool {
        self.eps.iter().all(|e| *e == 0.0)
    }

    /// `⟨b|⊗_q A_q|c⟩`.
    fn element(&self, b: u64, c: u64) -> f64 {
        let diff = b ^ c;
        self.eps
            .iter()
            .enumerate()
            .map(|(q, &e)| if diff >> q & 1 == 1 { e } else { 1.0 - e })
            .product()
    }
}

/// Inverts the assignment channel on the span of observed bitstrings and
/// their single-flip neighbours. The restricted matrix is symmetric positive
/// definite, so a Jacobi-preconditioned conjugate-gradient solve with
/// elements generated on the fly suffices. The result is rescaled to the
/// input total.
pub fn m3_correct(dist: &QuasiDistribution, model: &AssignmentModel) -> Result<QuasiDistribution> {
    let n = dist.n_qubits;
    if model.eps.len() != n {
        return Err(Error::QubitMismatch {
            expected: n,
            found: model.eps.len(),
        });
    }
    if model.is_identity() || dist.probs.is_empty() {
        return Ok(dist.clone());
    }
    let mut space: BTreeSet<u64> = BTreeSet::new();
    for &b in dist.probs.keys() {
        space.insert(b);
        for q in 0..n {
            space.insert(b ^ (1 << q));
        }
    }
    let basis: Vec<u64> = space.into_iter().collect();
    let rhs: Vec<f64> = basis
        .iter()
        .map(|b| dist.probs.get(b).copied().unwrap_or(0.0))
        .collect();
    let diag = model.element(0, 0);
    let matvec = |x: &[f64]| -> Vec<f64> {
        par::map_range(basis.len(), |r| {
            basis
                .iter()
                .zip(x)
                .map(|(&c, xc)| model.element(basis[r], c) * xc)
                .sum()
        })
    };
    let x = conjugate_gradient(matvec, &rhs, diag);

    let input_total = dist.total();
    let sum: f64 = x.iter().sum();
    let scale = if sum.abs() > 1e-300 {
        input_total / sum
    } else {
        1.0
    };
    let probs = basis
        .iter()
        .zip(&x)
        .filter(|(_, v)| **v != 0.0)
        .map(|(&b, &v)| (b, v * scale))
        .collect();
    Ok(QuasiDistribution { n_qubits: n, probs })
}

fn conjugate_gradient(matvec: impl Fn(&[f64]) -> Vec<f64>, b: &[f64], diag: f64) -> Vec<f64> {
    let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, c)| a * c).sum::<f64>();
    let n = b.len();
    let mut x: Vec<f64> = b.iter().map(|v| v / diag).collect();
    let ax = matvec(&x);
    let mut r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    let mut z: Vec<f64> = r.iter().map(|v| v / diag).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let target = 1e-15 * dot(b, b).sqrt().max(1e-300);
    for _ in 0..(4 * n).max(50) {
        if dot(&r, &r).sqrt() <= target {
            break;
        }
        let ap = matvec(&p);
        let alpha = rz / dot(&p, &ap);
        x.iter_mut().zip(&p).for_each(|(xi, pi)| *xi += alpha * pi);
        r.iter_mut().zip(&ap).for_each(|(ri, ai)| *ri -= alpha * ai);
        z = r.iter().map(|v| v / diag).collect();
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        p.iter_mut()
            .zip(&z)
            .for_each(|(pi, zi)| *pi = zi + beta * *pi);
    }
    x
}

/// Target particle-number sector; α spin orbitals are the even qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymmetrySector {
    pub n_alpha: usize,
    pub n_beta: usize,
}

impl SymmetrySector {
    pub fn new(n_alpha: usize, n_beta: usize) -> Self {
        Self { n_alpha, n_beta }
    }

    pub fn contains(&self, b: u64) -> bool {
        const ALPHA: u64 = 0x5555_5555_5555_5555;
        (b & ALPHA).count_ones() as usize == self.n_alpha
            && (b & !ALPHA).count_ones() as usize == self.n_beta
    }
}

/// Keeps in-sector bitstrings and renormalizes by their signed total.
/// Returns the filtered distribution and the retained fraction.
pub fn symmetry_postselect(
    dist: &QuasiDistribution,
    sector: SymmetrySector,
) -> Result<(QuasiDistribution, f64)> {
    let total = dist.total();
    let kept: Vec<(u64, f64)> = dist
        .probs
        .iter()
        .filter(|(b, _)| sector.contains(**b))
        .map(|(b, p)| (*b, *p))
        .collect();
    let in_sector: f64 = kept.iter().map(|(_, p)| p).sum();
    if in_sector.abs() < 1e-12 {
        return Err(Error::EmptySector);
    }
    let probs = kept.into_iter().map(|(b, p)| (b, p / in_sector)).collect();
    let fraction = if total != 0.0 { in_sector / total } else { 0.0 };
    Ok((
        QuasiDistribution {
            n_qubits: dist.n_qubits,
            probs,
        },
        fraction,
    ))
}

/// Selected mitigations; applied M3 first, then postselection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MitigationConfig {
    pub m3: bool,
    pub postselect: bool,
}

impl MitigationConfig {
    pub const NONE: Self = Self {
        m3: false,
        postselect: false,
    };
    pub const M3: Self = Self {
        m3: true,
        postselect: false,
    };
    pub const FULL: Self = Self {
        m3: true,
        postselect: true,
    };

    pub fn label(&self) -> &'static str {
        match (self.m3, self.postselect) {
            (false, false) => "none",
            (true, false) => "m3",
            (false, true) => "postselect",
            (true, true) => "m3+postselect",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Self::NONE),
            "m3" => Ok(Self::M3),
            "postselect" => Ok(Self {
                m3: false,
                postselect: true,
            }),
            "m3+postselect" => Ok(Self::FULL),
            _ => Err(Error::Parse(format!("unknown mitigation stack '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mitigated {
    pub dist: QuasiDistribution,
    pub retained_fraction: f64,
}

/// Runs the configured stack. Postselection only touches settings measured
/// entirely in Z (`z_diagonal`); other settings pass through unfiltered.
pub fn mitigation_stack(
    dist: &QuasiDistribution,
    config: MitigationConfig,
    model: &AssignmentModel,
    sector: Option<SymmetrySector>,
    z_diagonal: bool,
) -> Result<Mitigated> {
    let mut out = if config.m3 {
        m3_correct(dist, model)?
    } else {
        dist.clone()
    };
    let mut retained_fraction = 1.0;
    if config.postselect && z_diagonal {
        if let Some(sector) = sector {
            let (d, f) = symmetry_postselect(&out, sector)?;
            out = d;
            retained_fraction = f;
        }
    }
    Ok(Mitigated {
        dist: out,
        retained_fraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::apply_readout_noise;
    use proptest::prelude::*;

    fn quasi(n: usize, pairs: &[(u64, f64)]) -> QuasiDistribution {
        QuasiDistribution {
            n_qubits: n,
            probs: pairs.iter().copied().collect(),
        }
    }

    #[test]
    fn identity_model_is_identity() {
        let d = quasi(2, &[(0, 0.25), (3, 0.75)]);
        assert_eq!(
            m3_correct(&d, &AssignmentModel::new(vec![0.0, 0.0]).unwrap()).unwrap(),
            d
        );
    }

    #[test]
    fn single_qubit_inversion() {
        let d = quasi(1, &[(0, 0.9), (1, 0.1)]);
        let c = m3_correct(&d, &AssignmentModel::new(vec![0.1]).unwrap()).unwrap();
        assert!((c.probs[&0] - 1.0).abs() < 1e-12);
        assert!(c.probs.get(&1).copied().unwrap_or(0.0).abs() < 1e-12);
    }

    #[test]
    fn half_flip_is_singular() {
        assert_eq!(
            AssignmentModel::new(vec![0.1, 0.5]),
            Err(Error::SingularAssignment(1))
        );
    }

    #[test]
    fn postselection_filters_and_renormalizes() {
        let d = quasi(4, &[(0b0011, 0.5), (0b0111, 0.25), (0b1100, 0.25)]);
        let (out, f) = symmetry_postselect(&d, SymmetrySector::new(1, 1)).unwrap();
        assert_eq!(f, 0.75);
        assert!(!out.probs.contains_key(&0b0111));
        assert!((out.total() - 1.0).abs() < 1e-15);
        assert_eq!(
            symmetry_postselect(&quasi(4, &[(0b0111, 1.0)]), SymmetrySector::new(1, 1)),
            Err(Error::EmptySector)
        );
    }

    #[test]
    fn stack_order_and_bypass() {
        let model = AssignmentModel::new(vec![0.05; 4]).unwrap();
        let d = QuasiDistribution::from_dense(
            4,
            &apply_readout_noise(
                &{
                    let mut p = vec![0.0; 16];
                    p[0b0011] = 0.6;
                    p[0b1001] = 0.4;
                    p
                },
                &model.eps,
            ),
        );
        let none = mitigation_stack(
            &d,
            MitigationConfig::NONE,
            &model,
            Some(SymmetrySector::new(1, 1)),
            true,
        )
        .unwrap();
        assert_eq!(none.dist, d);
        let bypass = mitigation_stack(
            &d,
            MitigationConfig::FULL,
            &model,
            Some(SymmetrySector::new(1, 1)),
            false,
        )
        .unwrap();
        assert_eq!(bypass.retained_fraction, 1.0);
        let full = mitigation_stack(
            &d,
            MitigationConfig::FULL,
            &model,
            Some(SymmetrySector::new(1, 1)),
            true,
        )
        .unwrap();
        assert!((full.dist.probs[&0b0011] - 0.6).abs() < 1e-10);
        let again = mitigation_stack(
            &d,
            MitigationConfig::FULL,
            &model,
            Some(SymmetrySector::new(1, 1)),
            true,
        )
        .unwrap();
        assert_eq!(full, again);
    }

    proptest! {
        #[test]
        fn m3_inverts_the_channel(
            raw in proptest::collection::vec(0.0f64..1.0, 16),
            eps in proptest::collection::vec(0.0f64..0.3, 4),
        ) {
            let s: f64 = raw.iter().sum::<f64>() + 1e-9;
            let p: Vec<f64> = raw.iter().map(|v| v / s).collect();
            let noisy = QuasiDistribution::from_dense(4, &apply_readout_noise(&p, &eps));
            let back = m3_correct(&noisy, &AssignmentModel::new(eps).unwrap()).unwrap().to_dense();
            for (a, b) in back.iter().zip(&p) {
                prop_assert!((a - b).abs() < 1e-10);
            }
            prop_assert!((back.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }
}

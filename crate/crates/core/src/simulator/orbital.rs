//! One-body orbital rotations `Û(R)` with `Û a†_p Û† = Σ_q a†_q R_qp`, applied
//! identically to both spin sectors.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::exp::apply_excitation;
use super::Statevector;
use crate::error::{Error, Result};
use crate::linalg::orthogonality_error;
use crate::operators::FermionGenerator;

/// Adjacent-orbital rotation by `angle` between spatial orbitals `p` and `p + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Givens {
    pub p: usize,
    pub angle: f64,
}

/// `R = G_1 ⋯ G_K · diag(signs)` with each `G_k` a `Givens` rotation.
#[derive(Debug, Clone, PartialEq)]
pub struct GivensDecomposition {
    pub rotations: Vec<Givens>,
    pub signs: Vec<f64>,
}

pub fn givens_decompose(r: &DMatrix<f64>) -> Result<GivensDecomposition> {
    let n = r.nrows();
    if r.ncols() != n {
        return Err(Error::NotOrthogonal(f64::INFINITY));
    }
    let err = orthogonality_error(r);
    if err > 1e-10 {
        return Err(Error::NotOrthogonal(err));
    }
    let mut m = r.clone();
    let mut rotations = Vec::new();
    for j in 0..n {
        for i in (j + 1..n).rev() {
            let (a, b) = (m[(i - 1, j)], m[(i, j)]);
            if b.abs() < 1e-300 {
                continue;
            }
            let rho = a.hypot(b);
            let (c, s) = (a / rho, b / rho);
            for k in 0..n {
                let (x, y) = (m[(i - 1, k)], m[(i, k)]);
                m[(i - 1, k)] = c * x + s * y;
                m[(i, k)] = -s * x + c * y;
            }
            // The eliminating row rotation is Gᵀ; R collects G with angle atan2(s, c).
            rotations.push(Givens {
                p: i - 1,
                angle: s.atan2(c),
            });
        }
    }
    let signs = (0..n)
        .map(|k| if m[(k, k)] < 0.0 { -1.0 } else { 1.0 })
        .collect();
    Ok(GivensDecomposition { rotations, signs })
}

/// Number of Givens rotations an `n`-orbital rotation uses, for gate accounting.
pub fn givens_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

pub fn apply_orbital_rotation(state: &Statevector, rotation: &DMatrix<f64>) -> Result<Statevector> {
    let n = rotation.nrows();
    if 2 * n != state.n_qubits() {
        return Err(Error::QubitMismatch {
            expected: state.n_qubits(),
            found: 2 * n,
        });
    }
    let dec = givens_decompose(rotation)?;
    let mut out = state.clone();
    apply_decomposition(out.amplitudes_mut(), &dec);
    Ok(out)
}

pub fn apply_decomposition(psi: &mut [Complex64], dec: &GivensDecomposition) {
    let flip: u64 = dec
        .signs
        .iter()
        .enumerate()
        .filter(|(_, s)| **s < 0.0)
        .map(|(p, _)| 0b11u64 << (2 * p))
        .sum();
    if flip != 0 {
        for (b, a) in psi.iter_mut().enumerate() {
            if (b as u64 & flip).count_ones() % 2 == 1 {
                *a = -*a;
            }
        }
    }
    for g in dec.rotations.iter().rev() {
        apply_givens(psi, g);
    }
}

/// `exp(φ Σ_σ (a†_{p+1,σ} a_{p,σ} − h.c.))`.
pub fn apply_givens(psi: &mut [Complex64], g: &Givens) {
    for sigma in 0..2 {
        let from = 2 * g.p + sigma;
        apply_excitation(psi, &FermionGenerator::single(from, from + 2), g.angle);
    }
}

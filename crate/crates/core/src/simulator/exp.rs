//! Exact exponentials of anti-Hermitian generators.

use num_complex::Complex64;

use super::Statevector;
use crate::error::{Error, Result};
use crate::operators::{FermionGenerator, PauliString, PauliSum};

const TOL: f64 = 1e-10;

/// `exp(angle · generator) |ψ⟩` without Trotterization.
pub fn apply_exp_pauli(
    state: &Statevector,
    generator: &PauliSum,
    angle: f64,
) -> Result<Statevector> {
    if generator.n_qubits() != state.n_qubits() {
        return Err(Error::QubitMismatch {
            expected: state.n_qubits(),
            found: generator.n_qubits(),
        });
    }
    if !generator.is_anti_hermitian(TOL) {
        return Err(Error::NotAntiHermitian);
    }
    let mut out = state.clone();
    let terms: Vec<(PauliString, f64)> = generator
        .terms()
        .filter(|(p, _)| !p.is_identity())
        .map(|(p, c)| (*p, c.im))
        .collect();
    let commuting = terms
        .iter()
        .enumerate()
        .all(|(i, (p, _))| terms[i + 1..].iter().all(|(q, _)| p.commutes_with(q)));
    if commuting {
        for (p, kappa) in &terms {
            rotate_pauli(out.amplitudes_mut(), p, kappa * angle);
        }
    } else {
        taylor_exp(out.amplitudes_mut(), generator, angle);
    }
    Ok(out)
}

/// In-place `exp(iφP)|ψ⟩ = cos φ |ψ⟩ + i sin φ P|ψ⟩`.
pub fn rotate_pauli(psi: &mut [Complex64], p: &PauliString, phi: f64) {
    let (c, s) = (phi.cos(), phi.sin());
    let is = Complex64::new(0.0, s);
    if p.x == 0 {
        for (b, a) in psi.iter_mut().enumerate() {
            let (ph, _) = p.apply_to_basis(b as u64);
            *a *= c + is * ph;
        }
        return;
    }
    // Pair b with b ^ x, visiting each pair once from its smaller member.
    let top = 63 - p.x.leading_zeros();
    for b in 0..psi.len() as u64 {
        if b >> top & 1 == 1 {
            continue;
        }
        let b2 = b ^ p.x;
        let (ph1, _) = p.apply_to_basis(b);
        let (ph2, _) = p.apply_to_basis(b2);
        let (a1, a2) = (psi[b as usize], psi[b2 as usize]);
        psi[b2 as usize] = c * a2 + is * ph1 * a1;
        psi[b as usize] = c * a1 + is * ph2 * a2;
    }
}

fn taylor_exp(psi: &mut [Complex64], generator: &PauliSum, angle: f64) {
    let norm1: f64 = generator.terms().map(|(_, c)| c.norm()).sum();
    let steps = ((norm1 * angle.abs()).ceil() as usize).max(1);
    let dt = angle / steps as f64;
    let mut term = vec![Complex64::new(0.0, 0.0); psi.len()];
    let mut next = vec![Complex64::new(0.0, 0.0); psi.len()];
    for _ in 0..steps {
        term.copy_from_slice(psi);
        for k in 1..60 {
            next.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
            generator.apply_into(&term, &mut next);
            let f = dt / k as f64;
            let mut mag = 0.0;
            for (t, n) in term.iter_mut().zip(&next) {
                *t = n * f;
                mag += t.norm_sqr();
            }
            for (a, t) in psi.iter_mut().zip(&term) {
                *a += t;
            }
            if mag < 1e-34 {
                break;
            }
        }
    }
}

/// `exp(θ(G − G†))` for a single or double excitation, acting on the
/// two-dimensional invariant subspaces it couples.
pub fn apply_excitation(psi: &mut [Complex64], generator: &FermionGenerator, theta: f64) {
    if theta == 0.0 {
        return;
    }
    let (c, s) = (theta.cos(), theta.sin());
    let occ: u64 = generator.occupied.iter().map(|&m| 1u64 << m).sum();
    let virt: u64 = generator.virtuals.iter().map(|&m| 1u64 << m).sum();
    for b in 0..psi.len() as u64 {
        if b & occ != occ || b & virt != 0 {
            continue;
        }
        if let Some((sign, b2)) = generator.apply(b) {
            let (a1, a2) = (psi[b as usize], psi[b2 as usize]);
            psi[b as usize] = c * a1 - sign * s * a2;
            psi[b2 as usize] = sign * s * a1 + c * a2;
        }
    }
}

/// `⟨φ|A|ψ⟩`-ready image `A|ψ⟩` with `A = G − G†`.
pub fn apply_anti_hermitian(
    psi: &[Complex64],
    generator: &FermionGenerator,
    out: &mut [Complex64],
) {
    out.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
    let occ: u64 = generator.occupied.iter().map(|&m| 1u64 << m).sum();
    let virt: u64 = generator.virtuals.iter().map(|&m| 1u64 << m).sum();
    for b in 0..psi.len() as u64 {
        if b & occ != occ || b & virt != 0 {
            continue;
        }
        if let Some((sign, b2)) = generator.apply(b) {
            out[b2 as usize] += sign * psi[b as usize];
            out[b as usize] -= sign * psi[b2 as usize];
        }
    }
}

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// One- and two-electron integrals over spatial orbitals.
///
/// `g` is stored in chemist notation, `g[i][j][k][l] = (ij|kl)`, flattened
/// row-major. Energies are in Hartree.
#[derive(Debug, Clone, PartialEq)]
pub struct MolecularIntegrals {
    pub n_spatial: usize,
    pub n_electrons: usize,
    /// Twice the spin projection, `N_alpha - N_beta`.
    pub ms2: i32,
    pub core_energy: f64,
    pub h: DMatrix<f64>,
    pub g: Vec<f64>,
}

impl MolecularIntegrals {
    pub fn zeros(n_spatial: usize, n_electrons: usize, ms2: i32) -> Self {
        Self {
            n_spatial,
            n_electrons,
            ms2,
            core_energy: 0.0,
            h: DMatrix::zeros(n_spatial, n_spatial),
            g: vec![0.0; n_spatial.pow(4)],
        }
    }

    #[inline]
    pub fn g_index(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        let n = self.n_spatial;
        ((i * n + j) * n + k) * n + l
    }

    #[inline]
    pub fn g(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.g[self.g_index(i, j, k, l)]
    }

    /// Writes `value` into all eight index permutations that real orbitals make equal.
    pub fn set_g_symmetric(&mut self, i: usize, j: usize, k: usize, l: usize, value: f64) {
        for (a, b, c, d) in [
            (i, j, k, l),
            (j, i, k, l),
            (i, j, l, k),
            (j, i, l, k),
            (k, l, i, j),
            (l, k, i, j),
            (k, l, j, i),
            (l, k, j, i),
        ] {
            let idx = self.g_index(a, b, c, d);
            self.g[idx] = value;
        }
    }

    pub fn set_h_symmetric(&mut self, i: usize, j: usize, value: f64) {
        self.h[(i, j)] = value;
        self.h[(j, i)] = value;
    }

    pub fn n_qubits(&self) -> usize {
        2 * self.n_spatial
    }

    pub fn n_alpha(&self) -> usize {
        ((self.n_electrons as i64 + self.ms2 as i64) / 2) as usize
    }

    pub fn n_beta(&self) -> usize {
        ((self.n_electrons as i64 - self.ms2 as i64) / 2) as usize
    }

    /// Checks the structural invariants: symmetric `h`, 8-fold symmetric `g`,
    /// and an electron count/spin projection the orbital space can hold.
    pub fn validate(&self) -> Result<()> {
        let n = self.n_spatial;
        if self.h.nrows() != n || self.h.ncols() != n || self.g.len() != n.pow(4) {
            return Err(Error::InvalidIntegrals(
                "array shapes do not match n_spatial".into(),
            ));
        }
        if self.n_electrons > 2 * n {
            return Err(Error::InvalidIntegrals(format!(
                "{} electrons do not fit in {} spatial orbitals",
                self.n_electrons, n
            )));
        }
        if (self.n_electrons as i64 + self.ms2 as i64) % 2 != 0
            || self.ms2.unsigned_abs() as usize > self.n_electrons
            || self.n_alpha() > n
            || self.n_beta() > n
        {
            return Err(Error::InvalidIntegrals(format!(
                "MS2={} is inconsistent with {} electrons",
                self.ms2, self.n_electrons
            )));
        }
        let tol = 1e-10;
        for i in 0..n {
            for j in 0..n {
                if (self.h[(i, j)] - self.h[(j, i)]).abs() > tol {
                    return Err(Error::InvalidIntegrals(format!(
                        "h[{i}][{j}] is not symmetric"
                    )));
                }
                for k in 0..n {
                    for l in 0..n {
                        let v = self.g(i, j, k, l);
                        if (v - self.g(j, i, k, l)).abs() > tol
                            || (v - self.g(i, j, l, k)).abs() > tol
                            || (v - self.g(k, l, i, j)).abs() > tol
                        {
                            return Err(Error::InvalidIntegrals(format!(
                                "g[{i}{j}{k}{l}] breaks 8-fold symmetry"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Relabels spatial orbitals: new orbital `p` is old orbital `perm[p]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.n_spatial;
        let mut out = self.clone();
        for p in 0..n {
            for q in 0..n {
                out.h[(p, q)] = self.h[(perm[p], perm[q])];
                for r in 0..n {
                    for s in 0..n {
                        let idx = out.g_index(p, q, r, s);
                        out.g[idx] = self.g(perm[p], perm[q], perm[r], perm[s]);
                    }
                }
            }
        }
        out
    }

    /// Largest absolute two-electron integral.
    pub fn g_max_abs(&self) -> f64 {
        self.g.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

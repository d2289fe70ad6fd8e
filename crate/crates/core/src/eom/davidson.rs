//! Lazy Davidson iteration for the lowest roots of a symmetric matrix that
//! is only available element by element.
//!
//! Every subspace vector is supported on a set of "touched" columns, so
//! `M·v` only needs those columns. Each iteration preconditions the residual
//! of every unconverged root and keeps the correction on the touched columns
//! plus the few untouched coordinates where it is largest; only those new
//! columns are fetched from the oracle. Elements are memoized as unordered
//! pairs, so the ledger counts distinct elements.

use std::collections::{HashMap, HashSet};

use nalgebra::{DMatrix, DVector};

use super::matrix::{CostLedger, EomSolution};
use crate::error::{Error, Result};
use crate::linalg::sym_eigh;
use crate::par;

#[derive(Debug, Clone, PartialEq)]
pub struct DavidsonOptions {
    pub n_roots: usize,
    /// Residual 2-norm each root must reach.
    pub tol: f64,
    pub max_subspace: usize,
    pub max_iterations: usize,
    /// New columns admitted per unconverged root per iteration.
    pub columns_per_root: usize,
    /// Added to the eigenvalues to report total energies.
    pub shift: f64,
    /// Measurement circuits per prepared state, for the ledger.
    pub groups: u64,
}

impl Default for DavidsonOptions {
    fn default() -> Self {
        Self {
            n_roots: 3,
            tol: 1e-6,
            max_subspace: 60,
            max_iterations: 200,
            columns_per_root: 2,
            shift: 0.0,
            groups: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DavidsonResult {
    pub solution: EomSolution,
    pub residuals: Vec<f64>,
    pub converged: bool,
    /// Two returned roots lie within `tol` of each other.
    pub degenerate: bool,
    pub iterations: usize,
    pub ledger: CostLedger,
    /// Columns fetched from the oracle, in order of first use.
    pub columns: Vec<usize>,
}

/// Denominators closer to zero than this are clamped, keeping their sign.
const PRECONDITIONER_FLOOR: f64 = 1e-8;

struct Columns<'a, F> {
    oracle: &'a F,
    n: usize,
    memo: HashMap<(usize, usize), f64>,
    cols: HashMap<usize, DVector<f64>>,
    order: Vec<usize>,
    ledger: CostLedger,
    groups: u64,
}

impl<F: Fn(usize, usize) -> f64 + Sync> Columns<'_, F> {
    fn key(i: usize, j: usize) -> (usize, usize) {
        (i.min(j), i.max(j))
    }

    fn ensure(&mut self, js: &[usize]) {
        let mut missing: Vec<(usize, usize)> = Vec::new();
        let mut seen = HashSet::new();
        for &j in js {
            if self.cols.contains_key(&j) {
                continue;
            }
            for i in 0..self.n {
                let k = Self::key(i, j);
                if !self.memo.contains_key(&k) && seen.insert(k) {
                    missing.push(k);
                }
            }
        }
        let oracle = self.oracle;
        let values = par::map(&missing, |&(i, j)| oracle(i, j));
        for (k, v) in missing.into_iter().zip(values) {
            self.memo.insert(k, v);
            self.ledger.record_element(k.0 == k.1, self.groups);
        }
        for &j in js {
            if !self.cols.contains_key(&j) {
                let col = DVector::from_fn(self.n, |i, _| self.memo[&Self::key(i, j)]);
                self.cols.insert(j, col);
                self.order.push(j);
            }
        }
    }

    fn product(&self, v: &DVector<f64>) -> DVector<f64> {
        let mut w = DVector::zeros(self.n);
        for &j in &self.order {
            if v[j] != 0.0 {
                w.axpy(v[j], &self.cols[&j], 1.0);
            }
        }
        w
    }
}

/// Modified Gram–Schmidt against `basis`, repeated once if the norm drops
/// below 0.7 of its starting value. Returns `None` for a vanishing remainder.
fn orthonormalize(mut t: DVector<f64>, basis: &[DVector<f64>]) -> Option<DVector<f64>> {
    for _ in 0..2 {
        let before = t.norm();
        if before < 1e-300 {
            return None;
        }
        for v in basis {
            let c = v.dot(&t);
            t.axpy(-c, v, 1.0);
        }
        if t.norm() >= 0.7 * before {
            break;
        }
    }
    let nrm = t.norm();
    if nrm < 1e-10 {
        return None;
    }
    Some(t / nrm)
}

pub fn davidson_solve<F>(
    oracle: &F,
    diag: &[f64],
    options: &DavidsonOptions,
) -> Result<DavidsonResult>
where
    F: Fn(usize, usize) -> f64 + Sync,
{
    let n = diag.len();
    let k = options.n_roots;
    if k == 0 || k > n {
        return Err(Error::TooManyRoots {
            requested: k,
            available: n,
        });
    }
    let mut store = Columns {
        oracle,
        n,
        memo: HashMap::new(),
        cols: HashMap::new(),
        order: Vec::new(),
        ledger: CostLedger::default(),
        groups: options.groups,
    };
    for (i, &d) in diag.iter().enumerate() {
        store.memo.insert((i, i), d);
        store.ledger.record_element(true, options.groups);
    }

    let mut by_diag: Vec<usize> = (0..n).collect();
    by_diag.sort_by(|&a, &b| diag[a].total_cmp(&diag[b]).then(a.cmp(&b)));
    let guesses: Vec<usize> = by_diag[..k].to_vec();
    store.ensure(&guesses);
    let mut v: Vec<DVector<f64>> = guesses
        .iter()
        .map(|&g| {
            let mut e = DVector::zeros(n);
            e[g] = 1.0;
            e
        })
        .collect();
    let mut w: Vec<DVector<f64>> = v.iter().map(|x| store.product(x)).collect();
    let mut touched: HashSet<usize> = guesses.iter().copied().collect();

    let mut iterations = 0;
    loop {
        iterations += 1;
        let m = v.len();
        let t = DMatrix::from_fn(m, m, |a, b| 0.5 * (v[a].dot(&w[b]) + v[b].dot(&w[a])));
        let (theta, y) = sym_eigh(&t);
        let ritz = |r: usize, basis: &[DVector<f64>]| -> DVector<f64> {
            let mut x = DVector::zeros(n);
            for (a, b) in basis.iter().enumerate() {
                x.axpy(y[(a, r)], b, 1.0);
            }
            x
        };
        let xs: Vec<DVector<f64>> = (0..k).map(|r| ritz(r, &v)).collect();
        let res: Vec<DVector<f64>> = (0..k).map(|r| ritz(r, &w) - &xs[r] * theta[r]).collect();
        let norms: Vec<f64> = res.iter().map(|r| r.norm()).collect();
        let converged = norms.iter().all(|r| *r < options.tol);

        if converged || iterations >= options.max_iterations {
            let mut vecs = DMatrix::zeros(n, k);
            for (r, x) in xs.iter().enumerate() {
                vecs.set_column(r, x);
            }
            let degenerate = theta[..k]
                .windows(2)
                .any(|p| (p[1] - p[0]).abs() < options.tol);
            return Ok(DavidsonResult {
                solution: EomSolution::from_eigenpairs(&theta[..k], vecs, options.shift),
                residuals: norms,
                converged,
                degenerate,
                iterations,
                ledger: store.ledger,
                columns: store.order.clone(),
            });
        }

        // Thick restart onto the current Ritz vectors.
        if m + k > options.max_subspace {
            let keep = (2 * k).min(m);
            let nv: Vec<DVector<f64>> = (0..keep).map(|r| ritz(r, &v)).collect();
            let nw: Vec<DVector<f64>> = (0..keep).map(|r| ritz(r, &w)).collect();
            v = nv;
            w = nw;
        }

        let mut new_cols: Vec<usize> = Vec::new();
        let mut corrections: Vec<DVector<f64>> = Vec::new();
        for r in 0..k {
            if norms[r] < options.tol {
                continue;
            }
            let t = DVector::from_fn(n, |i, _| {
                let mut d = diag[i] - theta[r];
                if d.abs() < PRECONDITIONER_FLOOR {
                    d = if d < 0.0 {
                        -PRECONDITIONER_FLOOR
                    } else {
                        PRECONDITIONER_FLOOR
                    };
                }
                res[r][i] / d
            });
            let mut outside: Vec<usize> = (0..n)
                .filter(|i| !touched.contains(i) && t[*i] != 0.0)
                .collect();
            outside.sort_by(|&a, &b| t[b].abs().total_cmp(&t[a].abs()).then(a.cmp(&b)));
            let admit: Vec<usize> = outside.into_iter().take(options.columns_per_root).collect();
            let mut sparse = DVector::zeros(n);
            for i in touched.iter().copied().chain(admit.iter().copied()) {
                sparse[i] = t[i];
            }
            new_cols.extend(admit);
            corrections.push(sparse);
        }
        new_cols.sort_unstable();
        new_cols.dedup();
        store.ensure(&new_cols);
        touched.extend(new_cols.iter().copied());

        let mut added = 0;
        for c in corrections {
            if let Some(q) = orthonormalize(c, &v) {
                w.push(store.product(&q));
                v.push(q);
                added += 1;
            }
        }
        if added == 0 {
            // Stagnation inside the touched columns: widen the support.
            let worst = (0..k)
                .max_by(|&a, &b| norms[a].total_cmp(&norms[b]))
                .unwrap_or(0);
            let pick = (0..n).filter(|i| !touched.contains(i)).max_by(|&a, &b| {
                res[worst][a]
                    .abs()
                    .total_cmp(&res[worst][b].abs())
                    .then(b.cmp(&a))
            });
            let Some(p) = pick else {
                // Every column is known and the subspace is exhausted.
                continue;
            };
            store.ensure(&[p]);
            touched.insert(p);
            let mut e = DVector::zeros(n);
            e[p] = 1.0;
            if let Some(q) = orthonormalize(e, &v) {
                w.push(store.product(&q));
                v.push(q);
            }
        }
    }
}

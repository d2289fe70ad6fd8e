//! Shot allocation across measurement settings.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Which superposition a setting prepares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    /// `U|Φ_I⟩` (requires `i == j`).
    Diagonal,
    /// `U(|Φ_I⟩ + |Φ_J⟩)/√2`.
    Real,
    /// `U(|Φ_I⟩ + i|Φ_J⟩)/√2`.
    Imaginary,
}

impl Phase {
    fn tag(self) -> &'static str {
        match self {
            Phase::Diagonal => "d",
            Phase::Real => "re",
            Phase::Imaginary => "im",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SettingId {
    pub i: usize,
    pub j: usize,
    pub phase: Phase,
    pub group: usize,
}

impl fmt::Display for SettingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}-{}-{}-{}",
            self.i,
            self.j,
            self.phase.tag(),
            self.group
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShotPlan {
    pub allocations: Vec<(SettingId, u64)>,
    pub budget: u64,
    pub floor: u64,
    index: HashMap<SettingId, usize>,
}

impl ShotPlan {
    fn new(settings: &[SettingId], shots: Vec<u64>, budget: u64, floor: u64) -> Self {
        let allocations: Vec<(SettingId, u64)> = settings.iter().copied().zip(shots).collect();
        let index = allocations
            .iter()
            .enumerate()
            .map(|(k, (s, _))| (*s, k))
            .collect();
        Self {
            allocations,
            budget,
            floor,
            index,
        }
    }

    pub fn shots_for(&self, id: &SettingId) -> Option<u64> {
        self.index.get(id).map(|&k| self.allocations[k].1)
    }

    pub fn total(&self) -> u64 {
        self.allocations.iter().map(|(_, n)| n).sum()
    }

    pub fn len(&self) -> usize {
        self.allocations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.allocations.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("setting_id,shots\n");
        for (id, n) in &self.allocations {
            s.push_str(&format!("{id},{n}\n"));
        }
        s
    }
}

fn check_floor(settings: usize, budget: u64, floor: u64) -> Result<()> {
    if floor.saturating_mul(settings as u64) > budget {
        return Err(Error::InfeasibleFloor {
            budget,
            settings,
            floor,
        });
    }
    Ok(())
}

/// Equal split; the remainder goes to the first settings.
pub fn allocate_shots_uniform(settings: &[SettingId], budget: u64, floor: u64) -> Result<ShotPlan> {
    check_floor(settings.len(), budget, floor)?;
    let n = settings.len() as u64;
    if n == 0 {
        return Ok(ShotPlan::new(settings, Vec::new(), budget, floor));
    }
    let (base, extra) = (budget / n, budget % n);
    let shots = (0..n).map(|k| base + u64::from(k < extra)).collect();
    Ok(ShotPlan::new(settings, shots, budget, floor))
}

/// `Σ_ℓ |c_ℓ|²(1 − ⟨P_ℓ⟩²)` from `(c_ℓ, ⟨P_ℓ⟩)` pairs.
pub fn variance_proxy(terms: &[(f64, f64)]) -> f64 {
    terms
        .iter()
        .map(|(c, e)| c * c * (1.0 - e * e).max(0.0))
        .sum()
}

/// Splits `budget − pilot_cost` in proportion to `√v_s`, with every setting
/// at least `floor`. Settings whose share would fall below the floor are
/// pinned there and the rest re-split. All-zero variances fall back to the
/// uniform split.
pub fn allocate_shots_adaptive(
    settings: &[SettingId],
    variances: &[f64],
    budget: u64,
    pilot_cost: u64,
    floor: u64,
) -> Result<ShotPlan> {
    if variances.len() != settings.len() {
        return Err(Error::PlanMismatch(format!(
            "{} variances for {} settings",
            variances.len(),
            settings.len()
        )));
    }
    let remaining = budget
        .checked_sub(pilot_cost)
        .ok_or(Error::InfeasibleFloor {
            budget,
            settings: settings.len(),
            floor,
        })?;
    check_floor(settings.len(), remaining, floor)?;
    let weights: Vec<f64> = variances.iter().map(|v| v.max(0.0).sqrt()).collect();
    if weights.iter().all(|w| *w == 0.0) {
        return allocate_shots_uniform(settings, remaining, floor);
    }
    let shots = proportional(&weights, remaining, floor);
    Ok(ShotPlan::new(settings, shots, remaining, floor))
}

fn proportional(weights: &[f64], total: u64, floor: u64) -> Vec<u64> {
    let n = weights.len();
    let mut pinned = vec![false; n];
    let mut ideal = vec![0.0; n];
    loop {
        let n_pinned = pinned.iter().filter(|p| **p).count() as u64;
        let free_total = (total - floor * n_pinned) as f64;
        let wsum: f64 = weights
            .iter()
            .zip(&pinned)
            .filter(|(_, p)| !**p)
            .map(|(w, _)| w)
            .sum();
        let mut changed = false;
        for k in 0..n {
            if pinned[k] {
                ideal[k] = floor as f64;
                continue;
            }
            ideal[k] = if wsum > 0.0 {
                free_total * weights[k] / wsum
            } else {
                0.0
            };
            if ideal[k] < floor as f64 {
                pinned[k] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    // Largest-remainder rounding; ties go to the lower index.
    let mut shots: Vec<u64> = ideal.iter().map(|x| x.floor() as u64).collect();
    let assigned: u64 = shots.iter().sum();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        (ideal[b] - ideal[b].floor())
            .total_cmp(&(ideal[a] - ideal[a].floor()))
            .then(a.cmp(&b))
    });
    for &k in order.iter().take((total - assigned) as usize) {
        shots[k] += 1;
    }
    shots
}

/// Pilot pass: `fraction` of the budget spread uniformly, at least `floor` each.
pub fn pilot_plan(
    settings: &[SettingId],
    budget: u64,
    fraction: f64,
    floor: u64,
) -> Result<ShotPlan> {
    let pilot = ((budget as f64 * fraction).round() as u64).max(floor * settings.len() as u64);
    if pilot > budget {
        return Err(Error::InfeasibleFloor {
            budget,
            settings: settings.len(),
            floor,
        });
    }
    allocate_shots_uniform(settings, pilot, floor)
}

/// Shots consumed by `u` groups × `n` shots × `n_m` matrix elements.
pub fn budget_accounting(u: u64, n: u64, n_m: u64) -> u64 {
    u * n * n_m
}

//! Measurement-cost tables across system sizes.

use super::matrix::CostLedger;
use crate::error::{Error, Result};
use crate::linalg::log_log_slope;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalingMode {
    Brute,
    Davidson,
    DavidsonBrg,
}

impl ScalingMode {
    pub fn name(self) -> &'static str {
        match self {
            ScalingMode::Brute => "brute",
            ScalingMode::Davidson => "davidson",
            ScalingMode::DavidsonBrg => "davidson+brg",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(Self::Brute),
            "davidson" => Ok(Self::Davidson),
            "davidson+brg" => Ok(Self::DavidsonBrg),
            _ => Err(Error::Parse(format!("unknown scaling mode '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingRow {
    pub system: String,
    pub n_orbitals: usize,
    /// Manifold size `n_m`.
    pub n_basis: usize,
    /// Measurement circuits per prepared state.
    pub groups: usize,
    /// Occupied and virtual spin orbitals of the reference filling.
    pub m_occ: usize,
    pub m_virt: usize,
    pub ledger: CostLedger,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    pub mode: ScalingMode,
    pub rows: Vec<ScalingRow>,
    /// Log-log slopes against the spatial orbital count.
    pub element_slope: f64,
    pub circuit_slope: f64,
    pub shot_slope: Option<f64>,
}

pub fn scaling_report(mut rows: Vec<ScalingRow>, mode: ScalingMode) -> Result<ScalingReport> {
    if rows.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: rows.len(),
        });
    }
    rows.sort_by_key(|r| r.n_orbitals);
    let x: Vec<f64> = rows.iter().map(|r| r.n_orbitals as f64).collect();
    let slope = |f: &dyn Fn(&ScalingRow) -> u64| {
        log_log_slope(&x, &rows.iter().map(|r| f(r) as f64).collect::<Vec<_>>())
    };
    let element_slope = slope(&|r| r.ledger.elements_evaluated);
    let circuit_slope = slope(&|r| r.ledger.circuits_executed);
    let shot_slope = rows
        .iter()
        .all(|r| r.ledger.shots_consumed > 0)
        .then(|| slope(&|r| r.ledger.shots_consumed));
    Ok(ScalingReport {
        mode,
        rows,
        element_slope,
        circuit_slope,
        shot_slope,
    })
}

impl ScalingReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "mode,system,n_orbitals,n_basis,m_occ,m_virt,groups,elements_evaluated,circuits_executed,shots_consumed\n",
        );
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                self.mode.name(),
                r.system,
                r.n_orbitals,
                r.n_basis,
                r.m_occ,
                r.m_virt,
                r.groups,
                r.ledger.elements_evaluated,
                r.ledger.circuits_executed,
                r.ledger.shots_consumed
            ));
        }
        s.push_str(&format!(
            "# slope elements {:.4} circuits {:.4}",
            self.element_slope, self.circuit_slope
        ));
        if let Some(v) = self.shot_slope {
            s.push_str(&format!(" shots {v:.4}"));
        }
        s.push('\n');
        s
    }
}

//! Line-oriented `key=value` experiment configuration with dotted sections.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

/// Every accepted key with its default. Keys not listed here are rejected.
const SCHEMA: &[(&str, &str)] = &[
    ("system.fixture", ""),
    ("system.scan", ""),
    ("system.active_electrons", "0"),
    ("system.active_orbitals", "0"),
    ("ansatz.kind", "adapt"),
    ("ansatz.gradient_threshold", "1e-3"),
    ("ansatz.max_operators", "50"),
    ("ansatz.layers", "4"),
    ("ansatz.optimizer", "auto"),
    ("ansatz.max_evaluations", "20000"),
    ("ansatz.restarts", "1"),
    ("ansatz.perturbation", "0.1"),
    ("eom.roots", "4"),
    ("eom.solver", "dense"),
    ("eom.davidson_tol", "1e-6"),
    ("measurement.scheme", "exact"),
    ("measurement.brg_tolerance", "1e-4"),
    ("shots.budget", "0"),
    ("shots.allocation", "uniform"),
    ("shots.pilot_fraction", "0.1"),
    ("shots.floor", "10"),
    ("noise.depol_1q", "0"),
    ("noise.depol_2q", "0"),
    ("noise.readout", "0"),
    ("mitigation.stack", "none"),
    ("run.seed", "0"),
    ("run.repeats", "5"),
    ("output.dir", "out"),
    ("ansatz_bench.ansatze", "adapt,uccsd,hea"),
    ("ansatz_bench.optimizers", "gradient,derivative-free"),
    ("ansatz_bench.sampled_shots", "1000"),
    ("ansatz_bench.sampled_max_evaluations", "400"),
    ("brg_sweep.systems", ""),
    ("brg_sweep.tolerances", "1e-4,1e-6"),
    ("brg_sweep.error_fixture", ""),
    (
        "brg_sweep.error_tolerances",
        "1e-2,1e-3,1e-4,1e-5,1e-6,1e-8,1e-10,1e-12",
    ),
    ("brg_sweep.error_systems", ""),
    ("brg_sweep.error_tolerance", "1e-4"),
    ("noise_bench.fixtures", ""),
    (
        "noise_bench.configurations",
        "exact,shots,shots+readout,shots+readout+depol",
    ),
    ("noise_bench.mitigations", "none,m3,m3+postselect"),
    ("noise_bench.allocations", "uniform,adaptive"),
    ("noise_bench.budgets", "500000"),
    ("noise_bench.readout", "0.02"),
    ("noise_bench.depol_1q", "1e-4"),
    ("noise_bench.depol_2q", "1e-3"),
    ("noise_bench.depol_sweep", "0,1e-3,1e-2"),
];

/// Keys whose values name files; relative paths resolve against the config's directory.
const PATH_KEYS: &[&str] = &[
    "system.fixture",
    "system.scan",
    "brg_sweep.systems",
    "brg_sweep.error_fixture",
    "brg_sweep.error_systems",
    "noise_bench.fixtures",
];

/// Keys that do not change results and stay out of the hash.
const UNHASHED: &[&str] = &["output.dir"];

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    values: BTreeMap<String, String>,
    base: PathBuf,
}

impl Config {
    pub fn defaults() -> Self {
        Self {
            values: SCHEMA
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
            base: PathBuf::from("."),
        }
    }

    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut cfg = Self::defaults();
        cfg.base = base.to_path_buf();
        let mut seen = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split_once('#').map_or(raw, |(a, _)| a).trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| CliError::Config {
                line: n + 1,
                message: format!("expected key=value, found '{line}'"),
            })?;
            let k = k.trim();
            if seen.contains(&k.to_string()) {
                return Err(CliError::Config {
                    line: n + 1,
                    message: format!("duplicate key '{k}'"),
                });
            }
            cfg.set(k, v.trim()).map_err(|message| CliError::Config {
                line: n + 1,
                message,
            })?;
            seen.push(k.to_string());
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, &base)
    }

    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        match self.values.get_mut(key) {
            Some(slot) => {
                *slot = value.to_string();
                Ok(())
            }
            None => Err(format!("unknown key '{key}'")),
        }
    }

    pub fn str(&self, key: &str) -> &str {
        self.values
            .get(key)
            .map(String::as_str)
            .unwrap_or_else(|| panic!("'{key}' is not a schema key"))
    }

    fn typed<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        let v = self.str(key);
        v.parse()
            .map_err(|_| CliError::invalid(key, format!("cannot parse '{v}'")))
    }

    pub fn f64(&self, key: &str) -> Result<f64> {
        self.typed(key)
    }

    pub fn usize(&self, key: &str) -> Result<usize> {
        self.typed(key)
    }

    pub fn u64(&self, key: &str) -> Result<u64> {
        self.typed(key)
    }

    pub fn list(&self, key: &str) -> Vec<String> {
        self.str(key)
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(String::from)
            .collect()
    }

    pub fn f64_list(&self, key: &str) -> Result<Vec<f64>> {
        self.list(key)
            .iter()
            .map(|s| {
                s.parse()
                    .map_err(|_| CliError::invalid(key, format!("cannot parse '{s}'")))
            })
            .collect()
    }

    pub fn path(&self, key: &str) -> Result<PathBuf> {
        let v = self.str(key);
        if v.is_empty() {
            return Err(CliError::invalid(key, "a fixture path is required".into()));
        }
        Ok(self.base.join(v))
    }

    /// Comma-separated files; a single directory expands to its `.fcidump` files in name order.
    pub fn paths(&self, key: &str) -> Result<Vec<PathBuf>> {
        let items = self.list(key);
        if items.is_empty() {
            return Err(CliError::invalid(
                key,
                "at least one fixture path is required".into(),
            ));
        }
        let mut out = Vec::new();
        for item in items {
            let p = self.base.join(&item);
            if p.is_dir() {
                let mut files: Vec<PathBuf> = std::fs::read_dir(&p)
                    .map_err(|e| CliError::io(&p, e))?
                    .filter_map(|e| e.ok().map(|e| e.path()))
                    .filter(|f| f.extension().is_some_and(|x| x == "fcidump"))
                    .collect();
                files.sort();
                out.extend(files);
            } else {
                out.push(p);
            }
        }
        Ok(out)
    }

    /// Every key with its effective value, sorted, one per line.
    pub fn resolved_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.values {
            let _ = writeln!(s, "{k}={v}");
        }
        s
    }

    /// First 16 hex digits of SHA-256 over the result-relevant keys.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for (k, v) in &self.values {
            if UNHASHED.contains(&k.as_str()) {
                continue;
            }
            let v = if PATH_KEYS.contains(&k.as_str()) {
                normalize_paths(v)
            } else {
                v.clone()
            };
            h.update(format!("{k}={v}\n"));
        }
        h.finalize()
            .iter()
            .take(8)
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// File names only, so the hash does not depend on where the fixtures live.
fn normalize_paths(v: &str) -> String {
    v.split(',')
        .map(|p| {
            Path::new(p.trim())
                .file_name()
                .map_or(String::new(), |f| f.to_string_lossy().into_owned())
        })
        .collect::<Vec<_>>()
        .join(",")
}

//! CSV tables and the run directory they are written to.

use std::path::{Path, PathBuf};

use crate::config::Config;
use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Column `name` parsed as numbers; non-numeric cells become NaN.
    pub fn numbers(&self, name: &str) -> Vec<f64> {
        let Some(k) = self.column(name) else {
            return Vec::new();
        };
        self.rows
            .iter()
            .map(|r| r[k].parse().unwrap_or(f64::NAN))
            .collect()
    }

    pub fn strings(&self, name: &str) -> Vec<String> {
        let Some(k) = self.column(name) else {
            return Vec::new();
        };
        self.rows.iter().map(|r| r[k].clone()).collect()
    }

    /// Comment line with the config hash, then the header and rows.
    pub fn to_csv(&self, config_hash: &str) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| csv::Error::from(e.into_error()))?;
        let body = String::from_utf8(bytes).expect("csv output is utf-8");
        Ok(format!("# config_hash={config_hash}\n{body}"))
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let columns = r.headers()?.iter().map(String::from).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|rec| rec.iter().map(String::from).collect()))
            .collect::<std::result::Result<_, _>>()?;
        Ok(Self { columns, rows })
    }
}

/// Fixed-precision float formatting so CSV bytes are reproducible.
pub fn fmt(v: f64) -> String {
    format!("{v:.10}")
}

pub fn fmt_sci(v: f64) -> String {
    format!("{v:.6e}")
}

pub struct RunDir {
    pub dir: PathBuf,
    pub hash: String,
}

impl RunDir {
    /// Creates the directory and writes `resolved.conf` into it.
    pub fn create(config: &Config, command: &str) -> Result<Self> {
        let dir = PathBuf::from(config.str("output.dir"));
        std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        let hash = config.hash();
        let text = format!(
            "# command={command} config_hash={hash}\n{}",
            config.resolved_text()
        );
        write(&dir.join("resolved.conf"), &text)?;
        Ok(Self { dir, hash })
    }

    pub fn write_table(&self, name: &str, table: &Table) -> Result<PathBuf> {
        let path = self.dir.join(name);
        write(&path, &table.to_csv(&self.hash)?)?;
        Ok(path)
    }

    pub fn write_text(&self, name: &str, text: &str) -> Result<PathBuf> {
        let path = self.dir.join(name);
        write(&path, text)?;
        Ok(path)
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_skips_hash_line() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1".into(), "x,y".into()]);
        let text = t.to_csv("abc").unwrap();
        assert!(text.starts_with("# config_hash=abc\na,b\n"));
        assert_eq!(Table::from_csv(&text).unwrap(), t);
        assert_eq!(t.numbers("a"), vec![1.0]);
    }
}

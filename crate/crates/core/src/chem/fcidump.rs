//! FCIDUMP reader and writer.
//!
//! Records are `value i j k l` with 1-based orbital indices in chemist
//! notation. `value i j 0 0` is a one-body integral and `value 0 0 0 0` the
//! core (nuclear repulsion) energy. Each two-body record is expanded to all
//! eight symmetry-equivalent entries.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::MolecularIntegrals;
use crate::error::{Error, Result};

pub fn parse_fcidump(text: &str) -> Result<MolecularIntegrals> {
    let lines: Vec<&str> = text.lines().collect();
    let start = lines
        .iter()
        .position(|l| l.to_ascii_uppercase().contains("&FCI"))
        .ok_or_else(|| Error::FcidumpHeader("missing &FCI namelist".into()))?;
    let end = lines[start..]
        .iter()
        .position(|l| {
            let t = l.trim().to_ascii_uppercase();
            t.contains("&END") || t.ends_with('/')
        })
        .map(|p| p + start)
        .ok_or_else(|| Error::FcidumpHeader("missing &END terminator".into()))?;

    let mut header = lines[start..=end].join(" ");
    let upper = header.to_ascii_uppercase();
    let fci_at = upper.find("&FCI").unwrap_or(0);
    header = header[fci_at + 4..].to_string();
    if let Some(pos) = header.to_ascii_uppercase().find("&END") {
        header.truncate(pos);
    } else if let Some(pos) = header.rfind('/') {
        header.truncate(pos);
    }
    let fields = parse_namelist(&header);

    let get = |key: &str| -> Result<Option<i64>> {
        match fields.get(key) {
            None => Ok(None),
            Some(vals) => {
                let first = vals
                    .first()
                    .ok_or_else(|| Error::FcidumpHeader(format!("{key} has no value")))?;
                first
                    .parse::<i64>()
                    .map(Some)
                    .map_err(|_| Error::FcidumpHeader(format!("{key}={first} is not an integer")))
            }
        }
    };
    let norb = get("NORB")?.ok_or_else(|| Error::FcidumpHeader("NORB missing".into()))?;
    let nelec = get("NELEC")?.ok_or_else(|| Error::FcidumpHeader("NELEC missing".into()))?;
    let ms2 = get("MS2")?.unwrap_or(0);
    if norb <= 0 || nelec < 0 {
        return Err(Error::FcidumpHeader(format!(
            "invalid NORB={norb} / NELEC={nelec}"
        )));
    }
    let n = norb as usize;
    let mut ints = MolecularIntegrals::zeros(n, nelec as usize, ms2 as i32);

    for (offset, raw) in lines[end + 1..].iter().enumerate() {
        let line_no = end + 2 + offset;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 5 {
            return Err(Error::FcidumpRecord {
                line: line_no,
                message: format!("expected 5 fields, found {}", parts.len()),
            });
        }
        let value = parse_value(parts[0]).ok_or_else(|| Error::FcidumpRecord {
            line: line_no,
            message: format!("'{}' is not a number", parts[0]),
        })?;
        let mut idx = [0usize; 4];
        for (slot, p) in idx.iter_mut().zip(&parts[1..]) {
            let v: i64 = p.parse().map_err(|_| Error::FcidumpRecord {
                line: line_no,
                message: format!("'{p}' is not an orbital index"),
            })?;
            if v < 0 || v as usize > n {
                return Err(Error::IndexOutOfRange {
                    index: v.max(0) as usize,
                    limit: n,
                });
            }
            *slot = v as usize;
        }
        match idx {
            [0, 0, 0, 0] => ints.core_energy = value,
            [i, j, 0, 0] if i > 0 && j > 0 => ints.set_h_symmetric(i - 1, j - 1, value),
            // orbital energies (`value i 0 0 0`) carry no Hamiltonian information
            [_, 0, 0, 0] => {}
            [i, j, k, l] if i > 0 && j > 0 && k > 0 && l > 0 => {
                ints.set_g_symmetric(i - 1, j - 1, k - 1, l - 1, value)
            }
            _ => {
                return Err(Error::FcidumpRecord {
                    line: line_no,
                    message: format!("unrecognised index pattern {idx:?}"),
                })
            }
        }
    }
    ints.validate()?;
    Ok(ints)
}

fn parse_value(s: &str) -> Option<f64> {
    s.replace(['D', 'd'], "E").parse::<f64>().ok()
}

/// Splits `KEY=v1,v2 KEY2=v` into a map from upper-case key to values.
fn parse_namelist(text: &str) -> BTreeMap<String, Vec<String>> {
    let mut out: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut current: Option<String> = None;
    let spaced = text.replace(',', " ").replace('=', " = ");
    let tokens: Vec<&str> = spaced.split_whitespace().collect();
    let mut i = 0;
    while i < tokens.len() {
        if i + 1 < tokens.len() && tokens[i + 1] == "=" {
            let key = tokens[i].to_ascii_uppercase();
            out.entry(key.clone()).or_default();
            current = Some(key);
            i += 2;
            continue;
        }
        if let Some(key) = &current {
            out.get_mut(key)
                .expect("key inserted")
                .push(tokens[i].to_string());
        }
        i += 1;
    }
    out
}

/// Serialises integrals in FCIDUMP form. Only the symmetry-unique non-zero
/// entries are written; values use the shortest round-trip representation.
pub fn write_fcidump(ints: &MolecularIntegrals) -> String {
    let n = ints.n_spatial;
    let mut s = String::new();
    let _ = writeln!(
        s,
        " &FCI NORB={},NELEC={},MS2={},",
        n, ints.n_electrons, ints.ms2
    );
    let _ = writeln!(s, "  ORBSYM={}", "1,".repeat(n));
    let _ = writeln!(s, "  ISYM=1,");
    let _ = writeln!(s, " &END");
    for i in 0..n {
        for j in 0..=i {
            let ij = i * (i + 1) / 2 + j;
            for k in 0..n {
                for l in 0..=k {
                    let kl = k * (k + 1) / 2 + l;
                    if kl > ij {
                        continue;
                    }
                    let v = ints.g(i, j, k, l);
                    if v != 0.0 {
                        let _ = writeln!(s, "{:e} {} {} {} {}", v, i + 1, j + 1, k + 1, l + 1);
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..=i {
            let v = ints.h[(i, j)];
            if v != 0.0 {
                let _ = writeln!(s, "{:e} {} {} 0 0", v, i + 1, j + 1);
            }
        }
    }
    let _ = writeln!(s, "{:e} 0 0 0 0", ints.core_energy);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const H2: &str = " &FCI NORB=   2,NELEC= 2,MS2=0,
  ORBSYM=1,1,
  ISYM=1,
 &END
 0.6747559268144483    1    1    1    1
 0.181210462015197    2    1    2    1
 0.6637114013508134    2    2    1    1
 0.697651504490463    2    2    2    2
 -1.253309786645977    1    1  0  0
 -0.4750688487721779    2    2  0  0
 0.7151043390810812  0  0  0  0
";

    #[test]
    fn parses_h2_header_and_records() {
        let m = parse_fcidump(H2).unwrap();
        assert_eq!((m.n_spatial, m.n_electrons, m.ms2), (2, 2, 0));
        assert_eq!(m.core_energy, 0.7151043390810812);
        assert_eq!(m.g(0, 1, 1, 0), 0.181210462015197);
        assert_eq!(m.g(0, 0, 1, 1), 0.6637114013508134);
        assert_eq!(m.h[(1, 1)], -0.4750688487721779);
    }

    #[test]
    fn core_only_file() {
        let m = parse_fcidump("&FCI NORB=2, NELEC=2, MS2=0 /\n-1.0 0 0 0 0\n").unwrap();
        assert_eq!(m.core_energy, -1.0);
        assert!(m.h.iter().all(|v| *v == 0.0));
        assert!(m.g.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn index_out_of_range() {
        let err = parse_fcidump("&FCI NORB=2,NELEC=2,MS2=0\n&END\n0.5 3 1 0 0\n").unwrap_err();
        assert_eq!(err, Error::IndexOutOfRange { index: 3, limit: 2 });
    }

    #[test]
    fn missing_header_fields() {
        assert!(matches!(
            parse_fcidump("&FCI NELEC=2\n&END\n"),
            Err(Error::FcidumpHeader(_))
        ));
        assert!(matches!(
            parse_fcidump("&FCI NORB=x, NELEC=2\n&END\n"),
            Err(Error::FcidumpHeader(_))
        ));
        assert!(matches!(
            parse_fcidump("0.1 1 1 1 1\n"),
            Err(Error::FcidumpHeader(_))
        ));
    }

    #[test]
    fn non_numeric_value() {
        let err = parse_fcidump("&FCI NORB=2,NELEC=2\n&END\nabc 1 1 0 0\n").unwrap_err();
        assert!(matches!(err, Error::FcidumpRecord { line: 3, .. }));
    }

    #[test]
    fn fortran_exponent() {
        let m = parse_fcidump("&FCI NORB=1,NELEC=2\n&END\n-1.5D-01 1 1 0 0\n").unwrap();
        assert_eq!(m.h[(0, 0)], -0.15);
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let m = parse_fcidump(H2).unwrap();
        let again = parse_fcidump(&write_fcidump(&m)).unwrap();
        assert_eq!(m, again);
    }
}

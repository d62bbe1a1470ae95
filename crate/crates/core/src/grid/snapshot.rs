//! Plain-text field snapshots.
//!
//! ```text
//! n=<int>
//! <i> <j> <phi1> <phi2>      one row per node, i outer, j inner
//! ```
//!
//! Values carry 17 significant digits, so a written field reads back bit-exact.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::field::{GridSpec, ScalarField, VectorField};
use crate::error::{Error, Result};

pub fn format_snapshot(f: &VectorField) -> String {
    let spec = f.spec();
    let m = spec.nodes_per_axis();
    let mut out = String::with_capacity(48 * spec.node_count() + 16);
    writeln!(out, "n={}", spec.n()).unwrap();
    for i in 0..m {
        for j in 0..m {
            writeln!(
                out,
                "{i} {j} {:.16e} {:.16e}",
                f.comp1.get(i, j),
                f.comp2.get(i, j)
            )
            .unwrap();
        }
    }
    out
}

pub fn parse_snapshot(text: &str, origin: &Path) -> Result<VectorField> {
    let bad = |line: usize, reason: String| Error::Snapshot {
        path: origin.to_path_buf(),
        line,
        reason,
    };
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l.trim()));
    let (_, header) = lines.next().ok_or_else(|| bad(1, "empty file".into()))?;
    let n: usize = header
        .strip_prefix("n=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| bad(1, format!("expected header `n=<int>`, got {header:?}")))?;
    let spec = GridSpec::new(n).map_err(|e| bad(1, e.to_string()))?;

    let mut comp1 = ScalarField::zeros(spec);
    let mut comp2 = ScalarField::zeros(spec);
    let mut seen = vec![false; spec.node_count()];
    for (line, row) in lines.filter(|(_, l)| !l.is_empty()) {
        let cols: Vec<&str> = row.split_whitespace().collect();
        if cols.len() != 4 {
            return Err(bad(line, format!("expected 4 columns, got {}", cols.len())));
        }
        let index = |s: &str| -> Result<usize> {
            let v: usize = s
                .parse()
                .map_err(|_| bad(line, format!("bad node index {s:?}")))?;
            if v > n {
                return Err(bad(line, format!("node index {v} exceeds n={n}")));
            }
            Ok(v)
        };
        let value = |s: &str| -> Result<f64> {
            let v: f64 = s
                .parse()
                .map_err(|_| bad(line, format!("bad value {s:?}")))?;
            if !v.is_finite() {
                return Err(bad(line, format!("non-finite value {s:?}")));
            }
            Ok(v)
        };
        let (i, j) = (index(cols[0])?, index(cols[1])?);
        let k = spec.index(i, j);
        if std::mem::replace(&mut seen[k], true) {
            return Err(bad(line, format!("node ({i}, {j}) listed twice")));
        }
        comp1.set(i, j, value(cols[2])?);
        comp2.set(i, j, value(cols[3])?);
    }
    if let Some(k) = seen.iter().position(|s| !s) {
        let m = spec.nodes_per_axis();
        return Err(bad(0, format!("node ({}, {}) missing", k / m, k % m)));
    }
    VectorField::from_components(comp1, comp2)
}

pub fn write_snapshot(f: &VectorField, path: &Path) -> Result<()> {
    fs::write(path, format_snapshot(f)).map_err(|e| Error::io(path, e))
}

pub fn read_snapshot(path: &Path) -> Result<VectorField> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_snapshot(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{make_field, Initializer};
    use proptest::prelude::*;

    #[test]
    fn header_and_rows() {
        let f = make_field(GridSpec::new(2).unwrap(), Initializer::P2);
        let text = format_snapshot(&f);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n=2");
        assert_eq!(lines.len(), 10);
        assert_eq!(lines[5], "1 1 6.2500000000000000e-2 0.0000000000000000e0");
    }

    #[test]
    fn malformed_input_is_rejected() {
        let p = Path::new("mem");
        assert!(parse_snapshot("", p).is_err());
        assert!(parse_snapshot("m=2\n", p).is_err());
        assert!(parse_snapshot("n=2\n0 0 0 0\n", p).is_err());
        let good = format_snapshot(&VectorField::zeros(GridSpec::new(2).unwrap()));
        assert!(parse_snapshot(&good, p).is_ok());
        assert!(parse_snapshot(&good.replace("2 2 0", "2 2 nan"), p).is_err());
        assert!(parse_snapshot(&good.replacen("0 1 ", "0 0 ", 1), p).is_err());
    }

    proptest! {
        #[test]
        fn snapshots_read_back_bit_exact(vals in prop::collection::vec(-1e3..1e3f64, 32)) {
            let s = GridSpec::new(3).unwrap();
            let f = VectorField {
                comp1: ScalarField::from_fn(s, |i, j| vals[i * 4 + j]),
                comp2: ScalarField::from_fn(s, |i, j| vals[16 + i * 4 + j] * 1e-9),
            };
            let back = parse_snapshot(&format_snapshot(&f), Path::new("mem")).unwrap();
            prop_assert_eq!(back, f);
        }
    }
}

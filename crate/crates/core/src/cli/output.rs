use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::optimizer::{IterationTrace, TrialRecord};

/// One line of records.csv; records.json uses the same field names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordRow {
    pub seed: u64,
    pub iteration: usize,
    pub gamma: f64,
    pub xi11: f64,
    pub xi12: f64,
    pub xi21: f64,
    pub xi22: f64,
    pub j_value: f64,
    pub j_exact_p1: f64,
    pub j_refined: f64,
    pub verified: bool,
    /// Relative to the output directory, `/`-separated.
    pub snapshot_path: String,
}

/// Seed-scoped location of a record's field snapshot.
pub(crate) fn snapshot_path(seed: u64, iteration: usize) -> String {
    format!("seed-{seed}/snapshots/iter-{iteration:07}.txt")
}

/// Rows sorted by `(seed, iteration)`.
pub fn record_rows(records: &[TrialRecord]) -> Vec<RecordRow> {
    let mut rows: Vec<RecordRow> = records
        .iter()
        .map(|r| RecordRow {
            seed: r.seed,
            iteration: r.iteration,
            gamma: r.gamma,
            xi11: r.xi.a11,
            xi12: r.xi.a12,
            xi21: r.xi.a21,
            xi22: r.xi.a22,
            j_value: r.j_value,
            j_exact_p1: r.j_exact_p1,
            j_refined: r.j_refined,
            verified: r.verified,
            snapshot_path: snapshot_path(r.seed, r.iteration),
        })
        .collect();
    rows.sort_by_key(|r| (r.seed, r.iteration));
    rows
}

/// Writes records.csv (header always present) and its JSON mirror.
///
/// Floats use the shortest representation that parses back to the same bits.
pub fn emit_tables<C: Write, J: Write>(rows: &[RecordRow], csv_out: C, json_out: J) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(csv_out);
    w.write_record([
        "seed",
        "iteration",
        "gamma",
        "xi11",
        "xi12",
        "xi21",
        "xi22",
        "j_value",
        "j_exact_p1",
        "j_refined",
        "verified",
        "snapshot_path",
    ])?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    serde_json::to_writer_pretty(json_out, rows)?;
    Ok(())
}

/// Writes trace.csv: `iteration, gamma, j_value, tau`.
pub fn emit_trace<W: Write>(trace: &IterationTrace, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(["iteration", "gamma", "j_value", "tau"])?;
    for row in &trace.rows {
        w.serialize(row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// A LaTeX tabular with one `ξ & γ & J` row per record, in the layout of
/// the usual violation tables. Values are printed at full precision.
pub fn render_latex(rows: &[RecordRow]) -> String {
    let mut s = String::from("\\begin{tabular}{ccc}\n\\hline\n$\\xi$ & $\\gamma$ & $J_\\gamma(\\xi,\\phi_k)$ \\\\\n\\hline\n");
    for r in rows {
        s.push_str(&format!(
            "$\\begin{{bmatrix}} {} & {} \\\\ {} & {} \\end{{bmatrix}}$ & {} & {} \\\\\n",
            r.xi11, r.xi12, r.xi21, r.xi22, r.gamma, r.j_exact_p1
        ));
    }
    s.push_str("\\hline\n\\end{tabular}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::Matrix2;
    use crate::grid::{GridSpec, VectorField};
    use crate::optimizer::TraceRow;

    fn record(seed: u64, iteration: usize) -> TrialRecord {
        TrialRecord {
            seed,
            iteration,
            gamma: 2.2723,
            xi: Matrix2::new(0.1, 0.2, 1.0 / 3.0, 0.4),
            j_value: -0.018949,
            field_snapshot: VectorField::zeros(GridSpec::new(2).unwrap()),
            j_exact_p1: -0.01894912345678901,
            j_refined: -0.0189,
            verified: true,
        }
    }

    fn csv_text(rows: &[RecordRow]) -> String {
        let mut buf = Vec::new();
        emit_tables(rows, &mut buf, std::io::sink()).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn empty_tables_have_only_a_header() {
        assert_eq!(
            csv_text(&[]),
            "seed,iteration,gamma,xi11,xi12,xi21,xi22,j_value,j_exact_p1,j_refined,verified,snapshot_path\n"
        );
    }

    #[test]
    fn one_record_is_one_full_precision_row() {
        let text = csv_text(&record_rows(&[record(3, 17)]));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        let cells: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(cells.len(), 12);
        assert_eq!(cells[2], "2.2723");
        assert_eq!(cells[5].parse::<f64>().unwrap(), 1.0 / 3.0);
        assert_eq!(cells[8], "-0.01894912345678901");
        assert_eq!(cells[10], "true");
        assert_eq!(cells[11], "seed-3/snapshots/iter-0000017.txt");
    }

    #[test]
    fn rows_are_sorted_and_json_mirrors_csv() {
        let rows = record_rows(&[record(2, 5), record(1, 9), record(1, 4)]);
        let keys: Vec<_> = rows.iter().map(|r| (r.seed, r.iteration)).collect();
        assert_eq!(keys, [(1, 4), (1, 9), (2, 5)]);

        let mut json = Vec::new();
        emit_tables(&rows, std::io::sink(), &mut json).unwrap();
        let back: Vec<RecordRow> = serde_json::from_slice(&json).unwrap();
        assert_eq!(back, rows);
        let text = csv_text(&rows);
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let from_csv: Vec<RecordRow> = reader
            .deserialize()
            .collect::<std::result::Result<_, _>>()
            .unwrap();
        assert_eq!(from_csv, rows);
    }

    #[test]
    fn trace_rows_match_iterations() {
        let trace = IterationTrace {
            rows: (1..=4)
                .map(|k| TraceRow {
                    iteration: k,
                    gamma: 2.3,
                    j_value: 0.0,
                    tau: 1e-4,
                })
                .collect(),
        };
        let mut buf = Vec::new();
        emit_trace(&trace, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 5);
        assert_eq!(text.lines().next().unwrap(), "iteration,gamma,j_value,tau");
        assert!(text
            .lines()
            .skip(1)
            .all(|l| l.split(',').nth(2) == Some("0.0")));
    }

    #[test]
    fn latex_has_one_line_per_record() {
        let tex = render_latex(&record_rows(&[record(0, 1), record(0, 2)]));
        assert_eq!(tex.matches("bmatrix}$ &").count(), 2);
        assert!(tex.contains("& 2.2723 & -0.01894912345678901 \\\\"));
    }
}

//! CSV ingestion of sample matrices and CSV/JSON rendering of results.
//!
//! Matrices are plain comma-separated numeric rows with an optional single
//! header line (auto-detected: a first row that fails numeric parsing).
//! Reals are rendered with 17 significant digits so every finite double
//! round-trips bit-exactly through write → read.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::counts::DirectionCounts;
use crate::error::{Error, Result};
use crate::sample::SampleMatrix;
use crate::simulation::BenchmarkRow;
use crate::threshold::{SelectionResult, ThresholdScan};

/// Output encoding for result tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::UnsupportedFormat {
                reason: format!("'{other}' (expected csv or json)"),
            }),
        }
    }
}

/// Renders a real with 17 significant digits (exact round trip for f64).
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Parses a comma-separated numeric matrix. The first row is treated as a
/// header and skipped when any of its cells fails to parse as a number.
pub fn parse_csv_matrix(text: &str) -> Result<SampleMatrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut expected_columns: Option<usize> = None;
    let mut first_data_line = true;

    for (line_index, raw_line) in text.lines().enumerate() {
        let line = raw_line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let row_number = line_index + 1;
        let cells: Vec<&str> = line.split(',').collect();
        let mut parsed = Vec::with_capacity(cells.len());
        let mut failure: Option<(usize, String)> = None;
        for (column_index, cell) in cells.iter().enumerate() {
            match cell.trim().parse::<f64>() {
                Ok(v) => parsed.push(v),
                Err(_) => {
                    failure = Some((column_index + 1, cell.trim().to_string()));
                    break;
                }
            }
        }
        if let Some((column, cell)) = failure {
            if first_data_line {
                // header row: skip it
                first_data_line = false;
                continue;
            }
            return Err(Error::CsvParse {
                row: row_number,
                column,
                reason: format!("'{cell}' is not a number"),
            });
        }
        first_data_line = false;
        if let Some(expected) = expected_columns {
            if parsed.len() != expected {
                return Err(Error::RaggedRow {
                    row: row_number,
                    expected,
                    found: parsed.len(),
                });
            }
        } else {
            expected_columns = Some(parsed.len());
        }
        for (column_index, &v) in parsed.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteEntry { row: row_number, column: column_index + 1 });
            }
            if v < 0.0 {
                return Err(Error::NegativeEntry {
                    row: row_number,
                    column: column_index + 1,
                    value: v,
                });
            }
        }
        rows.push(parsed);
    }
    if rows.is_empty() {
        return Err(Error::EmptyVector);
    }
    SampleMatrix::from_rows(rows)
}

pub fn read_csv_matrix(path: impl AsRef<Path>) -> Result<SampleMatrix> {
    parse_csv_matrix(&fs::read_to_string(path)?)
}

/// Renders a matrix as headerless CSV with exact-round-trip reals.
pub fn matrix_to_csv(x: &SampleMatrix) -> String {
    let mut out = String::new();
    for row in x.rows() {
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&format_f64(*v));
        }
        out.push('\n');
    }
    out
}

pub fn write_matrix_csv(x: &SampleMatrix, path: impl AsRef<Path>) -> Result<()> {
    Ok(fs::write(path, matrix_to_csv(x))?)
}

/// Scan table as CSV: k, r_hat, best_s, ic_value, skipped. Skipped grid
/// points keep their k with empty value cells.
pub fn scan_to_csv(scan: &ThresholdScan) -> String {
    let mut out = String::from("k,r_hat,best_s,ic_value,skipped\n");
    for row in &scan.rows {
        match row.entry {
            Some(entry) => {
                let _ = writeln!(
                    out,
                    "{},{},{},{},false",
                    row.k,
                    entry.r_hat,
                    entry.best_s,
                    format_f64(entry.best_value)
                );
            }
            None => {
                let _ = writeln!(out, "{},,,,true", row.k);
            }
        }
    }
    out
}

/// Direction counts as CSV: rank, direction (1-based indices joined by ';'),
/// count, frequency (count/k).
pub fn counts_to_csv(counts: &DirectionCounts) -> String {
    let mut out = String::from("rank,direction,count,frequency\n");
    let k = counts.k() as f64;
    for (i, entry) in counts.entries().iter().enumerate() {
        let label: Vec<String> = entry.direction.indices().iter().map(u32::to_string).collect();
        let _ = writeln!(
            out,
            "{},{},{},{}",
            i + 1,
            label.join(";"),
            entry.count,
            format_f64(entry.count as f64 / k)
        );
    }
    out
}

/// Benchmark rows as CSV with the fixed column set.
pub fn benchmark_to_csv(rows: &[BenchmarkRow]) -> String {
    let mut out = String::from(
        "model,rep,n,d,criterion,mode,k_or_khat,s_hat,hellinger,accuracy_error,f1_error\n",
    );
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            row.model,
            row.rep,
            row.n,
            row.d,
            row.criterion,
            row.mode,
            row.k_or_khat,
            row.s_hat,
            format_f64(row.hellinger),
            format_f64(row.accuracy_error),
            format_f64(row.f1_error)
        );
    }
    out
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

/// Any result the pipeline can emit.
pub enum Output<'a> {
    Selection(&'a SelectionResult),
    Scan(&'a ThresholdScan),
    Benchmark(&'a [BenchmarkRow]),
    Counts(&'a DirectionCounts),
    Matrix(&'a SampleMatrix),
}

/// Renders a result in the requested format. Selection results are JSON-only
/// (they are nested); the tables support both encodings.
pub fn render(output: &Output<'_>, format: OutputFormat) -> Result<String> {
    match (output, format) {
        (Output::Selection(r), OutputFormat::Json) => to_json(r),
        (Output::Selection(_), OutputFormat::Csv) => Err(Error::UnsupportedFormat {
            reason: "selection results are nested; use json".into(),
        }),
        (Output::Scan(s), OutputFormat::Csv) => Ok(scan_to_csv(s)),
        (Output::Scan(s), OutputFormat::Json) => to_json(s),
        (Output::Benchmark(rows), OutputFormat::Csv) => Ok(benchmark_to_csv(rows)),
        (Output::Benchmark(rows), OutputFormat::Json) => to_json(&rows),
        (Output::Counts(c), OutputFormat::Csv) => Ok(counts_to_csv(c)),
        (Output::Counts(c), OutputFormat::Json) => to_json(c),
        (Output::Matrix(x), OutputFormat::Csv) => Ok(matrix_to_csv(x)),
        (Output::Matrix(_), OutputFormat::Json) => Err(Error::UnsupportedFormat {
            reason: "matrices are csv-only".into(),
        }),
    }
}

/// Writes rendered output to a file, or to stdout when `path` is `None`.
pub fn write_output(output: &Output<'_>, format: OutputFormat, path: Option<&Path>) -> Result<()> {
    let text = render(output, format)?;
    match path {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_plain_matrix() {
        let x = parse_csv_matrix("1.5,0\n0,2.25\n").unwrap();
        assert_eq!((x.n(), x.d()), (2, 2));
        assert_eq!(x.row(0), &[1.5, 0.0]);
        assert_eq!(x.row(1), &[0.0, 2.25]);
    }

    #[test]
    fn skips_single_header_row() {
        let x = parse_csv_matrix("a,b\n1,2\n3,4\n").unwrap();
        assert_eq!(x.n(), 2);
        assert_eq!(x.row(0), &[1.0, 2.0]);
    }

    #[test]
    fn reports_error_coordinates() {
        let err = parse_csv_matrix("1,-2\n").unwrap_err();
        match err {
            Error::NegativeEntry { row, column, .. } => assert_eq!((row, column), (1, 2)),
            other => panic!("unexpected error {other:?}"),
        }
        let err = parse_csv_matrix("1,2\n3,x\n").unwrap_err();
        match err {
            Error::CsvParse { row, column, .. } => assert_eq!((row, column), (2, 2)),
            other => panic!("unexpected error {other:?}"),
        }
        let err = parse_csv_matrix("1,2\n3\n").unwrap_err();
        assert!(matches!(err, Error::RaggedRow { row: 2, expected: 2, found: 1 }));
        // non-numeric cell past the first row is an error, not a header
        assert!(parse_csv_matrix("").is_err());
    }

    #[test]
    fn handles_crlf_and_blank_lines() {
        let x = parse_csv_matrix("h1,h2\r\n1,2\r\n\r\n3,4\r\n").unwrap();
        assert_eq!(x.n(), 2);
    }

    proptest! {
        #[test]
        fn matrix_round_trips_exactly(
            data in proptest::collection::vec(0.0f64..1e12, 6),
        ) {
            let x = SampleMatrix::new(data, 3, 2).unwrap();
            let back = parse_csv_matrix(&matrix_to_csv(&x)).unwrap();
            prop_assert_eq!(x, back);
        }
    }

    #[test]
    fn format_f64_has_17_significant_digits() {
        let rendered = format_f64(0.1);
        assert_eq!(rendered, "1.0000000000000001e-1");
        assert_eq!(rendered.parse::<f64>().unwrap(), 0.1);
        assert_eq!(format_f64(f64::NAN), "NaN");
    }
}

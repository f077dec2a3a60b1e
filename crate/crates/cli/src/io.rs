//! CSV and JSON file plumbing.
//!
//! Reals are written in the shortest form that parses back to the same
//! `f64`, so every output round-trips bit for bit.

use std::fs;
use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;

use crate::CliError;

/// Shortest round-trip decimal for a finite real.
pub fn fmt_real(v: f64) -> String {
    format!("{v:?}")
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Writes to `path`, or to stdout when no path is given.
pub fn write_text(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

/// Parses comma-separated points, one per row.
///
/// A first row with any non-numeric field is taken as a header. Lines
/// starting with `#` are comments. All rows must have the same width.
pub fn parse_points(text: &str, source: &str) -> Result<DMatrix<f64>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let parse_err = |line: u64, column: usize, message: String| CliError::Parse {
        path: source.to_string(),
        line,
        column,
        message,
    };

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for (index, record) in reader.records().enumerate() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, 1, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        if index == 0 && record.iter().any(|f| f.parse::<f64>().is_err()) {
            continue;
        }
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(parse_err(
                line,
                expected.min(record.len()) + 1,
                format!("expected {expected} fields, found {}", record.len()),
            ));
        }
        let mut row = Vec::with_capacity(expected);
        for (c, field) in record.iter().enumerate() {
            match field.parse::<f64>() {
                Ok(v) if v.is_finite() => row.push(v),
                Ok(_) => return Err(parse_err(line, c + 1, format!("non-finite value '{field}'"))),
                Err(_) => return Err(parse_err(line, c + 1, format!("cannot parse '{field}' as a number"))),
            }
        }
        rows.push(row);
    }
    let Some(d) = width else {
        return Err(parse_err(0, 0, "no data rows".into()));
    };
    Ok(DMatrix::from_fn(rows.len(), d, |i, j| rows[i][j]))
}

pub fn read_points(path: &Path) -> Result<DMatrix<f64>, CliError> {
    parse_points(&read_text(path)?, &path.display().to_string())
}

/// CSV with a `# seed: N` comment line, a header and one row per record.
pub fn csv_table(seed: u64, header: &[String], rows: &[Vec<String>]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(header).expect("in-memory write");
    for row in rows {
        writer.write_record(row).expect("in-memory write");
    }
    let body = String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 csv");
    format!("# seed: {seed}\n{body}")
}

/// Rows of a matrix as CSV with headers `x1..xd`.
pub fn matrix_csv(seed: u64, rows: &DMatrix<f64>) -> String {
    let header: Vec<String> = (1..=rows.ncols()).map(|j| format!("x{j}")).collect();
    let body: Vec<Vec<String>> = rows
        .row_iter()
        .map(|r| r.iter().map(|&v| fmt_real(v)).collect())
        .collect();
    csv_table(seed, &header, &body)
}

pub fn parse_json<T: serde::de::DeserializeOwned>(text: &str, source: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: source.to_string(),
        line: e.line() as u64,
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serialisable output");
    text.push('\n');
    text
}

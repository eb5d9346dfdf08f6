//! CSV emission and parsing with a fixed, locale-independent number format.

use std::fmt::Write as _;
use std::path::Path;

use crate::closed_form::CoefficientVector;
use crate::error::{Error, Result};

/// Scientific notation with 17 significant digits; parses back to the same `f64`.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Coefficient rows `z, C_0..C_N` for one `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    pub n_intervals: usize,
    pub rows: Vec<CoefficientVector>,
}

fn coefficient_header(n: usize) -> String {
    let mut header = String::from("z");
    for beta in 0..=n {
        write!(header, ",C_{beta}").unwrap();
    }
    header
}

/// Tables are written one after another, separated by a blank line.
pub fn write_coefficient_tables(tables: &[CoefficientTable]) -> String {
    let mut out = String::new();
    for (i, table) in tables.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&coefficient_header(table.n_intervals));
        out.push('\n');
        for row in &table.rows {
            out.push_str(&fmt_num(row.z));
            for c in &row.coeffs {
                out.push(',');
                out.push_str(&fmt_num(*c));
            }
            out.push('\n');
        }
    }
    out
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

pub(crate) fn parse_f64(path: &Path, line: usize, field: &str) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|e| parse_err(path, line, format!("invalid number {field:?}: {e}")))
}

/// Inverse of [`write_coefficient_tables`]. `path` only labels error messages.
pub fn parse_coefficient_tables(text: &str, path: &Path) -> Result<Vec<CoefficientTable>> {
    let mut tables: Vec<CoefficientTable> = Vec::new();
    let mut current: Option<CoefficientTable> = None;

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            tables.extend(current.take());
            continue;
        }
        match current.as_mut() {
            None => {
                let fields: Vec<&str> = line.split(',').collect();
                if fields.len() < 3 || fields[0] != "z" {
                    return Err(parse_err(path, lineno, "expected header z,C_0,...,C_N"));
                }
                let n = fields.len() - 2;
                if line != coefficient_header(n) {
                    return Err(parse_err(path, lineno, "malformed coefficient header"));
                }
                current = Some(CoefficientTable {
                    n_intervals: n,
                    rows: Vec::new(),
                });
            }
            Some(table) => {
                let values = line
                    .split(',')
                    .map(|f| parse_f64(path, lineno, f))
                    .collect::<Result<Vec<f64>>>()?;
                if values.len() != table.n_intervals + 2 {
                    return Err(parse_err(
                        path,
                        lineno,
                        format!(
                            "expected {} fields, found {}",
                            table.n_intervals + 2,
                            values.len()
                        ),
                    ));
                }
                table.rows.push(CoefficientVector {
                    z: values[0],
                    coeffs: values[1..].to_vec(),
                });
            }
        }
    }
    tables.extend(current);
    Ok(tables)
}

/// Long-format rows `z,N,<value>`.
pub fn write_long_table(value_name: &str, rows: &[(f64, usize, f64)]) -> String {
    let mut out = format!("z,N,{value_name}\n");
    for (z, n, v) in rows {
        writeln!(out, "{},{n},{}", fmt_num(*z), fmt_num(*v)).unwrap();
    }
    out
}

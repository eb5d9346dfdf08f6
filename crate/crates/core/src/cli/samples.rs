//! Sample files: CSV with columns `beta,x,value`, one row per node `β = 0..=N`,
//! `x = β/N`. The header row is optional.

use std::fs;
use std::path::Path;

use crate::cli::format::parse_f64;
use crate::error::{Error, Result};
use crate::interpolator::SampleSet;
use crate::space_kernel::SpaceParams;

/// Max deviation of a listed node from `β/N`.
pub const NODE_TOL: f64 = 1e-12;

pub fn read_samples(path: &Path, omega: f64) -> Result<SampleSet> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_samples(&text, path, omega)
}

/// Parses the contents of a sample file; `path` only labels error messages.
pub fn parse_samples(text: &str, path: &Path, omega: f64) -> Result<SampleSet> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };

    let mut rows: Vec<(usize, f64, f64)> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if rows.is_empty() && fields == ["beta", "x", "value"] {
            continue;
        }
        if fields.len() != 3 {
            return Err(parse_err(
                lineno,
                format!("expected 3 fields beta,x,value, found {}", fields.len()),
            ));
        }
        let beta: i64 = fields[0]
            .parse()
            .map_err(|e| parse_err(lineno, format!("invalid beta {:?}: {e}", fields[0])))?;
        if beta != rows.len() as i64 {
            return Err(parse_err(
                lineno,
                format!("expected beta = {}, found {beta}", rows.len()),
            ));
        }
        let x = parse_f64(path, lineno, fields[1])?;
        let value = parse_f64(path, lineno, fields[2])?;
        rows.push((lineno, x, value));
    }

    let n = rows.len() as i64 - 1;
    let params = SpaceParams::new(omega, n)?;
    for (beta, &(lineno, x, _)) in rows.iter().enumerate() {
        let expected = params.node(beta as i64);
        if (x - expected).abs() > NODE_TOL {
            return Err(Error::NodeMismatch {
                path: path.to_path_buf(),
                line: lineno,
                expected,
                found: x,
            });
        }
    }
    SampleSet::new(params, rows.into_iter().map(|(_, _, v)| v).collect())
}

//! The `.cay` text format: the order on the first line, then one row of
//! space-separated 0-based indices per line, row `i` column `j` holding `i·j`.

use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::group::{validate_named, CayleyTable, GroupError};

#[derive(Debug, Error)]
pub enum CayError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid group table")]
    Group(#[from] GroupError),
    #[error("{path}")]
    Io { path: String, source: std::io::Error },
}

pub fn to_cay_string(g: &CayleyTable) -> String {
    let n = g.order();
    let mut out = String::with_capacity(n * n * 4 + 8);
    out.push_str(&n.to_string());
    out.push('\n');
    for a in 0..n {
        let row: Vec<String> = g.row(a).iter().map(u32::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parses and fully validates a table; `name` becomes the group's descriptor.
pub fn parse_cay(text: &str, name: &str) -> Result<CayleyTable, CayError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (first_no, first) = lines.next().ok_or(CayError::Parse { line: 1, message: "empty file".into() })?;
    let n: usize = first.trim().parse().map_err(|_| CayError::Parse {
        line: first_no + 1,
        message: format!("expected the group order, found {:?}", first.trim()),
    })?;
    if n == 0 {
        return Err(CayError::Parse { line: first_no + 1, message: "order must be positive".into() });
    }
    let mut rows = Vec::with_capacity(n);
    for (no, line) in lines {
        if rows.len() == n {
            return Err(CayError::Parse { line: no + 1, message: format!("more than {n} rows") });
        }
        let row = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>().map_err(|_| CayError::Parse {
                    line: no + 1,
                    message: format!("expected a non-negative index, found {tok:?}"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != n {
            return Err(CayError::Parse {
                line: no + 1,
                message: format!("expected {n} entries, found {}", row.len()),
            });
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(CayError::Parse {
            line: text.lines().count() + 1,
            message: format!("expected {n} rows, found {}", rows.len()),
        });
    }
    Ok(validate_named(&rows, name)?)
}

pub fn read_cay(path: &Path) -> Result<CayleyTable, CayError> {
    let text = fs::read_to_string(path).map_err(|source| CayError::Io { path: path.display().to_string(), source })?;
    let name = path.file_stem().map_or_else(|| "table".to_string(), |s| s.to_string_lossy().into_owned());
    parse_cay(&text, &name)
}

pub fn write_cay(path: &Path, g: &CayleyTable) -> Result<(), CayError> {
    fs::write(path, to_cay_string(g)).map_err(|source| CayError::Io { path: path.display().to_string(), source })
}

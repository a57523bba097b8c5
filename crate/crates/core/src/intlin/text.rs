//! Plain-text matrix and vector formats.
//!
//! Matrix files: optional `#` comment lines, a header line `m n`, then `m`
//! lines of `n` whitespace-separated signed integers.

use std::fmt::Write as _;

use num_bigint::BigInt;
use sha2::{Digest, Sha256};

use super::matrix::{IntMatrix, IntVector};
use crate::error::{Error, Result};

fn parse_int(tok: &str, line: usize) -> Result<BigInt> {
    tok.parse::<BigInt>().map_err(|_| Error::Parse {
        line,
        msg: format!("not an integer: {tok:?}"),
    })
}

pub fn parse_matrix(text: &str) -> Result<IntMatrix> {
    let mut data_lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = data_lines.next().ok_or(Error::Parse {
        line: 0,
        msg: "empty matrix file".into(),
    })?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(Error::Parse {
            line: hline,
            msg: "header must be `m n`".into(),
        });
    }
    let parse_dim = |s: &str| {
        s.parse::<usize>().map_err(|_| Error::Parse {
            line: hline,
            msg: format!("bad dimension {s:?}"),
        })
    };
    let (m, n) = (parse_dim(dims[0])?, parse_dim(dims[1])?);
    let mut data = Vec::with_capacity(m * n);
    let mut rows_seen = 0;
    for (lno, l) in data_lines {
        if rows_seen == m {
            return Err(Error::Parse {
                line: lno,
                msg: format!("more than {m} rows"),
            });
        }
        let row: Vec<BigInt> = l
            .split_whitespace()
            .map(|t| parse_int(t, lno))
            .collect::<Result<_>>()?;
        if row.len() != n {
            return Err(Error::Parse {
                line: lno,
                msg: format!("expected {n} entries, found {}", row.len()),
            });
        }
        data.extend(row);
        rows_seen += 1;
    }
    if rows_seen != m {
        return Err(Error::Parse {
            line: text.lines().count(),
            msg: format!("expected {m} rows, found {rows_seen}"),
        });
    }
    IntMatrix::new(m, n, data).map_err(|e| Error::Parse {
        line: hline,
        msg: e.to_string(),
    })
}

pub fn format_matrix(a: &IntMatrix) -> String {
    let mut out = format!("{} {}\n", a.rows(), a.cols());
    for i in 0..a.rows() {
        let row: Vec<String> = a.row(i).iter().map(ToString::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Hex SHA-256 of the canonical matrix text; identifies inputs in outputs.
pub fn matrix_digest(a: &IntMatrix) -> String {
    let hash = Sha256::digest(format_matrix(a).as_bytes());
    let mut s = String::with_capacity(64);
    for b in hash {
        let _ = write!(s, "{b:02x}");
    }
    s
}

/// Parses `"1,-2,1"` (whitespace tolerated).
pub fn parse_vector(text: &str) -> Result<IntVector> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(IntVector::default());
    }
    text.split(',')
        .map(|t| parse_int(t.trim(), 1))
        .collect::<Result<Vec<_>>>()
        .map(IntVector)
}

/// Basis files: one comma-separated vector per line, `#` comments allowed.
pub fn parse_vector_list(text: &str) -> Result<Vec<IntVector>> {
    let mut out = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let l = l.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let v = parse_vector(l).map_err(|e| match e {
            Error::Parse { msg, .. } => Error::Parse { line: i + 1, msg },
            other => other,
        })?;
        out.push(v);
    }
    Ok(out)
}

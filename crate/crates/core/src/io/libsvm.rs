//! libsvm text format: `label idx:val idx:val ...`, 1-based indices on disk.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Result, SieveError};
use crate::matrix::DenseMatrix;
use crate::model::{LossKind, ProblemData};

fn parse_err(line: usize, message: impl Into<String>) -> SieveError {
    SieveError::Parse {
        line,
        message: message.into(),
    }
}

/// Parses libsvm text into a dense problem. The column count is the largest
/// index seen, or `n_features` when given (which must cover every index).
/// Blank lines and `#` comments are skipped.
pub fn parse_libsvm(text: &str, loss: LossKind, n_features: Option<usize>) -> Result<ProblemData> {
    let mut labels = Vec::new();
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut max_index = 0usize;
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let label_tok = tokens.next().expect("nonempty line has a token");
        let label: f64 = label_tok
            .parse()
            .map_err(|_| parse_err(line_no, format!("invalid label {label_tok:?}")))?;
        let mut entries = Vec::new();
        let mut last = 0usize;
        for tok in tokens {
            let (idx, val) = tok
                .split_once(':')
                .ok_or_else(|| parse_err(line_no, format!("expected idx:val, got {tok:?}")))?;
            let idx: usize = idx
                .parse()
                .map_err(|_| parse_err(line_no, format!("invalid index {idx:?}")))?;
            if idx == 0 {
                return Err(parse_err(line_no, "indices are 1-based; found 0"));
            }
            if idx <= last {
                return Err(parse_err(line_no, format!("index {idx} is not increasing")));
            }
            last = idx;
            let val: f64 = val
                .parse()
                .map_err(|_| parse_err(line_no, format!("invalid value {val:?}")))?;
            max_index = max_index.max(idx);
            entries.push((idx - 1, val));
        }
        labels.push(label);
        rows.push(entries);
    }
    if rows.is_empty() {
        return Err(SieveError::InvalidInput("libsvm input has no data rows".into()));
    }
    let n = match n_features {
        Some(n) if n < max_index => {
            return Err(SieveError::InvalidInput(format!(
                "feature index {max_index} exceeds the declared {n} features"
            )))
        }
        Some(n) => n,
        None => max_index,
    };
    let mut a = DenseMatrix::zeros(rows.len(), n);
    for (i, row) in rows.iter().enumerate() {
        for &(j, v) in row {
            a.set(i, j, v);
        }
    }
    ProblemData::new(a, labels, loss)
}

pub fn read_libsvm(path: &Path, loss: LossKind, n_features: Option<usize>) -> Result<ProblemData> {
    parse_libsvm(&fs::read_to_string(path)?, loss, n_features)
}

/// Writes nonzero entries only. Values use the shortest round-trip decimal form,
/// so reading the file back reproduces the matrix exactly.
pub fn write_libsvm(problem: &ProblemData, path: &Path) -> Result<()> {
    let a = problem.a();
    let mut out = String::new();
    for i in 0..problem.m() {
        write!(out, "{}", problem.b()[i]).expect("writing to a String");
        for j in 0..problem.n() {
            let v = a.get(i, j);
            if v != 0.0 {
                write!(out, " {}:{}", j + 1, v).expect("writing to a String");
            }
        }
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

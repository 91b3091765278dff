//! Synthetic bundles: a directory holding `A.bin`, `b.bin` and `meta.json`.
//!
//! Each `.bin` file is a 24-byte header (the 8-byte magic, then rows and
//! columns as little-endian `u64`) followed by row-major little-endian `f64`
//! values. `b.bin` stores `b` as an `m×1` matrix.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::synthetic::{Sampler, Synthetic, SyntheticSpec};
use crate::error::{Result, SieveError};
use crate::matrix::DenseMatrix;
use crate::model::{IndexSet, ProblemData};

pub const BUNDLE_MAGIC: [u8; 8] = *b"SIEVEMAT";
const HEADER_LEN: usize = 24;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundleMeta {
    pub m: usize,
    pub n: usize,
    pub spec: SyntheticSpec,
    pub sampler: Sampler,
    /// Support of `x*` and its values on it.
    pub x_true_support: IndexSet,
    pub x_true_values: Vec<f64>,
}

impl BundleMeta {
    pub fn x_true(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.n];
        for (j, v) in self.x_true_support.iter().zip(&self.x_true_values) {
            x[j] = *v;
        }
        x
    }
}

fn encode(rows: usize, cols: usize, row_major: &[f64]) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * row_major.len());
    out.extend_from_slice(&BUNDLE_MAGIC);
    out.extend_from_slice(&(rows as u64).to_le_bytes());
    out.extend_from_slice(&(cols as u64).to_le_bytes());
    for v in row_major {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

fn decode(bytes: &[u8], what: &str) -> Result<(usize, usize, Vec<f64>)> {
    let bad = |msg: String| SieveError::InvalidInput(format!("{what}: {msg}"));
    if bytes.len() < HEADER_LEN || bytes[..8] != BUNDLE_MAGIC {
        return Err(bad("missing bundle header".into()));
    }
    let word = |k: usize| {
        u64::from_le_bytes(bytes[8 * k..8 * k + 8].try_into().expect("8-byte slice")) as usize
    };
    let (rows, cols) = (word(1), word(2));
    let body = &bytes[HEADER_LEN..];
    let expected = rows.checked_mul(cols).and_then(|c| c.checked_mul(8));
    if expected != Some(body.len()) {
        return Err(bad(format!(
            "header says {rows}x{cols} but the body has {} bytes",
            body.len()
        )));
    }
    let values = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    Ok((rows, cols, values))
}

/// Writes the bundle into `dir`, creating it if needed.
pub fn write_bundle(dir: &Path, data: &Synthetic) -> Result<()> {
    fs::create_dir_all(dir)?;
    let p = &data.problem;
    fs::write(dir.join("A.bin"), encode(p.m(), p.n(), &p.a().to_row_major()))?;
    fs::write(dir.join("b.bin"), encode(p.m(), 1, p.b()))?;
    let support = IndexSet::support(&data.x_true, 0.0);
    let meta = BundleMeta {
        m: p.m(),
        n: p.n(),
        spec: data.spec,
        sampler: data.sampler,
        x_true_values: support.iter().map(|j| data.x_true[j]).collect(),
        x_true_support: support,
    };
    fs::write(dir.join("meta.json"), serde_json::to_string_pretty(&meta)? + "\n")?;
    Ok(())
}

pub fn read_bundle(dir: &Path) -> Result<(ProblemData, BundleMeta)> {
    let meta: BundleMeta = serde_json::from_str(&fs::read_to_string(dir.join("meta.json"))?)?;
    let (m, n, a) = decode(&fs::read(dir.join("A.bin"))?, "A.bin")?;
    let (mb, one, b) = decode(&fs::read(dir.join("b.bin"))?, "b.bin")?;
    if one != 1 || mb != m || (m, n) != (meta.m, meta.n) {
        return Err(SieveError::InvalidInput(format!(
            "bundle shapes disagree: A is {m}x{n}, b is {mb}x{one}, meta says {}x{}",
            meta.m, meta.n
        )));
    }
    let problem = ProblemData::new(DenseMatrix::from_row_major(m, n, &a)?, b, meta.spec.loss)?;
    Ok((problem, meta))
}

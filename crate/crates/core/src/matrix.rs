//! Column-major dense matrix with the handful of products the solvers need.
//!
//! Every product is computed with a fixed reduction order, so results are
//! bit-identical regardless of how many worker threads rayon uses.

use rayon::prelude::*;

use crate::error::{check_len, Result, SieveError};

/// Work (rows x columns touched) below which products stay on the calling thread.
const PAR_THRESHOLD: usize = 1 << 16;
const ROW_CHUNK: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Builds a matrix from column-major storage.
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        check_len("column-major matrix data", rows * cols, data.len())?;
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from row-major storage.
    pub fn from_row_major(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        check_len("row-major matrix data", rows * cols, data.len())?;
        let mut out = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.data[j * rows + i] = data[i * cols + j];
            }
        }
        Ok(out)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(SieveError::InvalidInput("ragged rows".into()));
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::from_row_major(m, n, &flat)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.rows + i]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[j * self.rows + i] = v;
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn as_col_major(&self) -> &[f64] {
        &self.data
    }

    pub fn to_row_major(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.rows * self.cols];
        for j in 0..self.cols {
            for (i, v) in self.column(j).iter().enumerate() {
                out[i * self.cols + j] = *v;
            }
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// `A x` over all columns.
    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "mul: vector length");
        let all: Vec<usize> = (0..self.cols).collect();
        self.mul_subset(&all, x)
    }

    /// `A_I z`: forward product using only the columns listed in `cols`.
    pub fn mul_subset(&self, cols: &[usize], z: &[f64]) -> Vec<f64> {
        assert_eq!(cols.len(), z.len(), "mul_subset: vector length");
        let mut out = vec![0.0; self.rows];
        let accumulate = |start: usize, chunk: &mut [f64]| {
            let end = start + chunk.len();
            for (&j, &zj) in cols.iter().zip(z) {
                if zj == 0.0 {
                    continue;
                }
                let col = &self.data[j * self.rows + start..j * self.rows + end];
                for (o, a) in chunk.iter_mut().zip(col) {
                    *o += zj * a;
                }
            }
        };
        if self.rows * cols.len() >= PAR_THRESHOLD && self.rows > ROW_CHUNK {
            out.par_chunks_mut(ROW_CHUNK)
                .enumerate()
                .for_each(|(c, chunk)| accumulate(c * ROW_CHUNK, chunk));
        } else {
            accumulate(0, &mut out);
        }
        out
    }

    /// `Aᵀ y` over all columns.
    pub fn tmul(&self, y: &[f64]) -> Vec<f64> {
        let all: Vec<usize> = (0..self.cols).collect();
        self.tmul_subset(&all, y)
    }

    /// `A_Iᵀ y`: one dot product per listed column.
    pub fn tmul_subset(&self, cols: &[usize], y: &[f64]) -> Vec<f64> {
        assert_eq!(y.len(), self.rows, "tmul_subset: vector length");
        let dot = |&j: &usize| -> f64 { dot(self.column(j), y) };
        if self.rows * cols.len() >= PAR_THRESHOLD {
            cols.par_iter().map(dot).collect()
        } else {
            cols.iter().map(dot).collect()
        }
    }

    pub fn column_norms(&self) -> Vec<f64> {
        (0..self.cols).map(|j| norm2(self.column(j))).collect()
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Result, SieveError};
use crate::matrix::DenseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossKind {
    /// `h(y) = Σ (y_i - b_i)² / 2`
    LeastSquares,
    /// `h(y) = Σ log(1 + exp(-b_i y_i))`, labels in {-1, +1}
    Logistic,
}

impl LossKind {
    pub fn name(self) -> &'static str {
        match self {
            LossKind::LeastSquares => "ls",
            LossKind::Logistic => "logistic",
        }
    }
}

/// Design matrix, response and loss: the `Φ(x) = h(Ax)` half of the model.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemData {
    a: DenseMatrix,
    b: Vec<f64>,
    loss: LossKind,
}

impl ProblemData {
    pub fn new(a: DenseMatrix, b: Vec<f64>, loss: LossKind) -> Result<Self> {
        if a.rows() == 0 || a.cols() == 0 {
            return Err(SieveError::InvalidInput(format!(
                "design matrix must be non-empty, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        check_len("response vector", a.rows(), b.len())?;
        if !a.is_finite() {
            return Err(SieveError::InvalidInput(
                "design matrix has non-finite entries".into(),
            ));
        }
        if let Some(v) = b.iter().find(|v| !v.is_finite()) {
            return Err(SieveError::InvalidInput(format!(
                "response has non-finite entry {v}"
            )));
        }
        if loss == LossKind::Logistic {
            if let Some((i, v)) = b.iter().enumerate().find(|(_, v)| **v != 1.0 && **v != -1.0) {
                return Err(SieveError::InvalidInput(format!(
                    "logistic labels must be -1 or +1, found {v} at row {i}"
                )));
            }
        }
        Ok(Self { a, b, loss })
    }

    pub fn a(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn loss(&self) -> LossKind {
        self.loss
    }

    /// Number of samples.
    pub fn m(&self) -> usize {
        self.a.rows()
    }

    /// Number of features.
    pub fn n(&self) -> usize {
        self.a.cols()
    }

    /// `‖Aᵀb‖∞`, the scale used to express λ as a fraction `λ_c`.
    pub fn lambda_scale(&self) -> f64 {
        crate::matrix::norm_inf(&self.a.tmul(&self.b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eye(n: usize) -> DenseMatrix {
        let mut a = DenseMatrix::zeros(n, n);
        for i in 0..n {
            a.set(i, i, 1.0);
        }
        a
    }

    #[test]
    fn validates_logistic_labels() {
        assert!(ProblemData::new(eye(2), vec![1.0, -1.0], LossKind::Logistic).is_ok());
        let err = ProblemData::new(eye(2), vec![1.0, 0.0], LossKind::Logistic).unwrap_err();
        assert!(err.to_string().contains("row 1"));
    }

    #[test]
    fn rejects_non_finite_and_mismatch() {
        let mut a = eye(2);
        a.set(0, 1, f64::NAN);
        assert!(ProblemData::new(a, vec![0.0, 0.0], LossKind::LeastSquares).is_err());
        assert!(ProblemData::new(eye(2), vec![0.0], LossKind::LeastSquares).is_err());
        assert!(ProblemData::new(DenseMatrix::zeros(0, 3), vec![], LossKind::LeastSquares).is_err());
    }
}

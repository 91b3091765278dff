//! Optimality measures: the proximal residual `R(x) = x − Prox_P(x − ∇Φ(x))` and
//! the relative KKT residual
//! `η = ‖x − Prox_P(x − Aᵀ∇h(Ax))‖ / (1 + ‖x‖ + ‖Aᵀ∇h(Ax)‖)`.

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Result, SieveError};
use crate::losses::phi_gradient;
use crate::matrix::norm2;
use crate::model::{extract, IndexSet, ProblemData, RegularizerSpec};
use crate::prox::prox;

/// Which quantity the sieving loop compares against its tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// `‖R(x)‖ ≤ ε`
    ResidualNorm,
    /// `η_KKT ≤ ε`
    #[default]
    RelativeKkt,
}

impl Criterion {
    pub fn name(self) -> &'static str {
        match self {
            Criterion::ResidualNorm => "residual",
            Criterion::RelativeKkt => "kkt",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    /// `R(x)`, full length `n`.
    pub r: Vec<f64>,
    /// `‖R(x)‖₂`
    pub norm: f64,
    pub eta_kkt: f64,
    /// `‖∇Φ(x)‖₂`
    pub gradient_norm: f64,
    /// `‖x‖₂`
    pub x_norm: f64,
}

impl ResidualReport {
    pub fn value(&self, criterion: Criterion) -> f64 {
        match criterion {
            Criterion::ResidualNorm => self.norm,
            Criterion::RelativeKkt => self.eta_kkt,
        }
    }

    /// Denominator of the relative KKT residual.
    pub fn kkt_scale(&self) -> f64 {
        1.0 + self.x_norm + self.gradient_norm
    }
}

/// Residuals at `x`, whose support must lie inside `support`.
///
/// The full gradient `Aᵀ∇h(Ax)` is formed once (from the support columns only)
/// and shared by both measures.
pub fn residual(
    problem: &ProblemData,
    spec: &RegularizerSpec,
    x: &[f64],
    support: &IndexSet,
) -> Result<ResidualReport> {
    check_len("residual point", problem.n(), x.len())?;
    check_len("residual regularizer", problem.n(), spec.dim())?;
    if let Some((j, _)) = x
        .iter()
        .enumerate()
        .find(|(j, v)| **v != 0.0 && !support.contains(*j))
    {
        return Err(SieveError::InvalidInput(format!(
            "x has a nonzero at {j}, outside the declared support"
        )));
    }
    let z = extract(x, support)?;
    let grad = phi_gradient(problem, &z, support)?;
    let shifted: Vec<f64> = x.iter().zip(&grad).map(|(a, g)| a - g).collect();
    let p = prox(spec, &shifted, 1.0)?;
    let r: Vec<f64> = x.iter().zip(&p).map(|(a, b)| a - b).collect();
    let norm = norm2(&r);
    let gradient_norm = norm2(&grad);
    let x_norm = norm2(x);
    Ok(ResidualReport {
        eta_kkt: norm / (1.0 + x_norm + gradient_norm),
        r,
        norm,
        gradient_norm,
        x_norm,
    })
}

/// Objective `Φ(x) + P(x)` at a full-length point.
pub fn objective(problem: &ProblemData, spec: &RegularizerSpec, x: &[f64]) -> Result<f64> {
    check_len("objective point", problem.n(), x.len())?;
    let support = IndexSet::support(x, 0.0);
    let phi = crate::losses::phi_value(problem, &extract(x, &support)?, &support)?;
    Ok(phi + spec.evaluate(x)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{norm_inf, DenseMatrix};
    use crate::prox::soft_threshold;
    use crate::testutil::{random_problem, random_specs};
    use crate::LossKind;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn one_dimensional_optimum_has_zero_residual() {
        let a = DenseMatrix::from_rows(&[vec![1.0]]).unwrap();
        let p = ProblemData::new(a, vec![3.0], LossKind::LeastSquares).unwrap();
        let spec = RegularizerSpec::lasso(1, 1.0).unwrap();
        let rep = residual(&p, &spec, &[2.0], &IndexSet::full(1)).unwrap();
        assert_eq!(rep.norm, 0.0);
        assert_eq!(rep.eta_kkt, 0.0);
        let off = residual(&p, &spec, &[1.0], &IndexSet::full(1)).unwrap();
        assert!((off.norm - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_is_optimal_above_lambda_max() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = random_problem(&mut rng, 20, 30, LossKind::LeastSquares);
        let lmax = p.lambda_scale();
        let zero = vec![0.0; 30];
        let spec = RegularizerSpec::lasso(30, lmax).unwrap();
        assert_eq!(residual(&p, &spec, &zero, &IndexSet::empty()).unwrap().norm, 0.0);

        // at λmax/2 the residual of 0 is −soft(Aᵀb, λ)
        let half = RegularizerSpec::lasso(30, lmax / 2.0).unwrap();
        let rep = residual(&p, &half, &zero, &IndexSet::empty()).unwrap();
        let atb = p.a().tmul(p.b());
        let expect: f64 = atb
            .iter()
            .map(|v| soft_threshold(*v, lmax / 2.0).powi(2))
            .sum::<f64>()
            .sqrt();
        assert!((rep.norm - expect).abs() <= 1e-12 * expect);
        assert!(rep.norm > 0.0);
        assert!((rep.gradient_norm - crate::matrix::norm2(&atb)).abs() < 1e-12);
        assert_eq!(norm_inf(&rep.r), norm_inf(&atb) - lmax / 2.0);
    }

    #[test]
    fn kkt_is_scaled_residual_and_support_is_checked() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for loss in [LossKind::LeastSquares, LossKind::Logistic] {
            let p = random_problem(&mut rng, 15, 8, loss);
            for spec in random_specs(&mut rng, 8) {
                let x: Vec<f64> = (0..8).map(|_| rng.random_range(-2.0..2.0)).collect();
                let rep = residual(&p, &spec, &x, &IndexSet::full(8)).unwrap();
                assert!(rep.eta_kkt <= rep.norm);
                assert!((rep.eta_kkt * rep.kkt_scale() - rep.norm).abs() < 1e-12 * (1.0 + rep.norm));
                assert_eq!(rep.value(Criterion::ResidualNorm), rep.norm);
                assert!(residual(&p, &spec, &x, &IndexSet::new(vec![0, 1], 8).unwrap()).is_err());
            }
        }
    }

    #[test]
    fn residual_is_continuous() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = random_problem(&mut rng, 12, 6, LossKind::Logistic);
        let full = IndexSet::full(6);
        for spec in random_specs(&mut rng, 6) {
            let x: Vec<f64> = (0..6).map(|_| rng.random_range(-1.0..1.0)).collect();
            let y: Vec<f64> = x.iter().map(|v| v + 1e-7).collect();
            let rx = residual(&p, &spec, &x, &full).unwrap();
            let ry = residual(&p, &spec, &y, &full).unwrap();
            // R is Lipschitz with constant at most 2 + L
            let l = crate::losses::lipschitz_bound(&p, &full).unwrap();
            assert!(crate::matrix::dist2(&rx.r, &ry.r) <= (2.0 + l) * 1e-7 * 6f64.sqrt() * 1.01);
        }
    }
}

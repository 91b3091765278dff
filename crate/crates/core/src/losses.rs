//! Loss values, gradients and smoothness bounds for `Φ(x) = h(Ax)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_len, Result, SieveError};
use crate::matrix::{dot, norm2};
use crate::model::{IndexSet, LossKind, ProblemData};

/// Value of `h` and its gradient at `y = Ax`.
#[derive(Debug, Clone, PartialEq)]
pub struct LossEval {
    pub value: f64,
    pub gradient_y: Vec<f64>,
}

const POWER_MAX_ITERS: usize = 50;
const POWER_TOL: f64 = 1e-3;
const POWER_INFLATION: f64 = 1.01;
const POWER_SEED: u64 = 0x5eed_1e55;

/// `log(1 + exp(t))` without overflow.
pub(crate) fn log1p_exp(t: f64) -> f64 {
    if t > 35.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

/// `1 / (1 + exp(-t))` without overflow.
fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

pub fn loss_value(problem: &ProblemData, y: &[f64]) -> Result<f64> {
    check_len("loss argument", problem.m(), y.len())?;
    let b = problem.b();
    Ok(match problem.loss() {
        LossKind::LeastSquares => {
            0.5 * y
                .iter()
                .zip(b)
                .map(|(yi, bi)| (yi - bi) * (yi - bi))
                .sum::<f64>()
        }
        LossKind::Logistic => y.iter().zip(b).map(|(yi, bi)| log1p_exp(-bi * yi)).sum(),
    })
}

pub fn evaluate_loss(problem: &ProblemData, y: &[f64]) -> Result<LossEval> {
    let value = loss_value(problem, y)?;
    let b = problem.b();
    let gradient_y = match problem.loss() {
        LossKind::LeastSquares => y.iter().zip(b).map(|(yi, bi)| yi - bi).collect(),
        LossKind::Logistic => y
            .iter()
            .zip(b)
            .map(|(yi, bi)| -bi * sigmoid(-bi * yi))
            .collect(),
    };
    Ok(LossEval { value, gradient_y })
}

/// `∇Φ(M_I x_support) = Aᵀ ∇h(A_I x_support)`, full length `n`.
pub fn phi_gradient(problem: &ProblemData, x_support: &[f64], set: &IndexSet) -> Result<Vec<f64>> {
    check_len("phi_gradient support values", set.len(), x_support.len())?;
    if set.min_dim() > problem.n() {
        return Err(SieveError::InvalidInput("index set exceeds problem dimension".into()));
    }
    let y = problem.a().mul_subset(set.as_slice(), x_support);
    let eval = evaluate_loss(problem, &y)?;
    Ok(problem.a().tmul(&eval.gradient_y))
}

/// `Φ(M_I z)`.
pub fn phi_value(problem: &ProblemData, z: &[f64], set: &IndexSet) -> Result<f64> {
    check_len("phi_value support values", set.len(), z.len())?;
    loss_value(problem, &problem.a().mul_subset(set.as_slice(), z))
}

/// Upper bound on the Lipschitz constant of `∇Φ` restricted to the columns `I`:
/// `λ_max(A_IᵀA_I)` for least squares, a quarter of it for logistic loss.
pub fn lipschitz_bound(problem: &ProblemData, set: &IndexSet) -> Result<f64> {
    let lmax = power_iteration(problem, set, POWER_MAX_ITERS)?;
    let curvature = match problem.loss() {
        LossKind::LeastSquares => 1.0,
        LossKind::Logistic => 0.25,
    };
    Ok(curvature * POWER_INFLATION * lmax)
}

/// Cheap lower estimate used to seed backtracking.
pub(crate) fn lipschitz_estimate(problem: &ProblemData, set: &IndexSet, iters: usize) -> Result<f64> {
    let lmax = power_iteration(problem, set, iters)?;
    Ok(match problem.loss() {
        LossKind::LeastSquares => lmax,
        LossKind::Logistic => 0.25 * lmax,
    })
}

/// Largest eigenvalue of `A_IᵀA_I` by power iteration from a fixed start vector.
fn power_iteration(problem: &ProblemData, set: &IndexSet, max_iters: usize) -> Result<f64> {
    if set.is_empty() {
        return Err(SieveError::InvalidInput(
            "Lipschitz bound needs a non-empty index set".into(),
        ));
    }
    if set.min_dim() > problem.n() {
        return Err(SieveError::InvalidInput("index set exceeds problem dimension".into()));
    }
    let cols = set.as_slice();
    let a = problem.a();
    let mut rng = ChaCha8Rng::seed_from_u64(POWER_SEED);
    let mut v: Vec<f64> = (0..cols.len()).map(|_| rng.random_range(0.5..1.5)).collect();
    let nv = norm2(&v);
    v.iter_mut().for_each(|e| *e /= nv);

    let mut estimate = 0.0;
    for _ in 0..max_iters {
        let w = a.tmul_subset(cols, &a.mul_subset(cols, &v));
        let rayleigh = dot(&v, &w);
        let nw = norm2(&w);
        if nw == 0.0 {
            return Ok(0.0);
        }
        v = w.into_iter().map(|e| e / nw).collect();
        let done = (rayleigh - estimate).abs() <= POWER_TOL * rayleigh;
        estimate = rayleigh;
        if done {
            break;
        }
    }
    Ok(estimate)
}

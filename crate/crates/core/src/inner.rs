//! Inexact solvers for the reduced problems `min_z Φ(M_I z) + P(M_I z)`.
//!
//! A solve produces an approximate minimizer `ẑ`, then finalizes
//! `x_I = Prox_{P_I}(ẑ − ∇Φ_I(ẑ))`. That point is the exact minimizer of the
//! reduced problem perturbed by `−⟨δ̂, z⟩`, where
//! `δ̂ = ẑ − x_I + ∇Φ_I(x_I) − ∇Φ_I(ẑ)` and `‖δ̂‖ ≤ (1 + L)‖ẑ − x_I‖`.
//! The sieving loop only needs `‖δ̂‖` to be below its tolerance.

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Result, SieveError};
use crate::losses::{evaluate_loss, lipschitz_bound, lipschitz_estimate, loss_value};
use crate::matrix::{dist2, norm2};
use crate::model::{IndexSet, ProblemData, RegularizerSpec};
use crate::prox::prox;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum InnerBackend {
    /// Accelerated proximal gradient with restart on objective increase.
    #[default]
    Apg,
    /// Plain proximal gradient (monotone with step `1/L`).
    ProxGrad,
}

/// How the error-vector bound is scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Tolerance {
    /// `‖δ̂‖ ≤ ε`
    Absolute,
    /// `‖δ̂‖ ≤ ε·(1 + ‖x_I‖ + ‖∇Φ_I(x_I)‖)`, the reduced counterpart of the
    /// relative KKT denominator. It never exceeds the full-problem denominator.
    #[default]
    Relative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InnerConfig {
    pub backend: InnerBackend,
    pub max_iters: usize,
    /// The outer tolerance `ε`.
    pub epsilon_outer: f64,
    pub tolerance: Tolerance,
    /// Fixed step `1/L` from the power-iteration bound; otherwise backtracking.
    pub use_lipschitz: bool,
}

impl Default for InnerConfig {
    fn default() -> Self {
        Self {
            backend: InnerBackend::Apg,
            max_iters: 20_000,
            epsilon_outer: 1e-6,
            tolerance: Tolerance::Relative,
            use_lipschitz: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnerResult {
    /// Finalized iterate over `I`.
    pub x_support: Vec<f64>,
    /// `‖δ̂‖`
    pub delta_norm: f64,
    /// Bound `‖δ̂‖` had to meet (`ε`, or `ε` times the relative scale).
    pub delta_tolerance: f64,
    /// `‖ẑ − x_support‖`
    pub step_norm: f64,
    /// Smoothness constant used for the stopping test.
    pub lipschitz: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Number of momentum restarts (APG only).
    pub restarts: usize,
}

/// Anything that can solve a reduced problem to a requested error-vector bound.
pub trait ReducedSolver {
    fn solve(
        &self,
        problem: &ProblemData,
        spec_restricted: &RegularizerSpec,
        set: &IndexSet,
        z_init: &[f64],
    ) -> Result<InnerResult>;

    fn epsilon(&self) -> f64;
}

impl ReducedSolver for InnerConfig {
    fn solve(
        &self,
        problem: &ProblemData,
        spec_restricted: &RegularizerSpec,
        set: &IndexSet,
        z_init: &[f64],
    ) -> Result<InnerResult> {
        solve_reduced(problem, spec_restricted, set, z_init, self)
    }

    fn epsilon(&self) -> f64 {
        self.epsilon_outer
    }
}

/// Reduced smooth part `Φ_I(z) = h(A_I z)` with cached products.
struct Reduced<'a> {
    problem: &'a ProblemData,
    cols: &'a [usize],
}

impl Reduced<'_> {
    fn forward(&self, z: &[f64]) -> Vec<f64> {
        self.problem.a().mul_subset(self.cols, z)
    }

    fn value(&self, az: &[f64]) -> Result<f64> {
        loss_value(self.problem, az)
    }

    /// `(h(Az), A_Iᵀ∇h(Az))`
    fn value_grad(&self, az: &[f64]) -> Result<(f64, Vec<f64>)> {
        let eval = evaluate_loss(self.problem, az)?;
        Ok((eval.value, self.problem.a().tmul_subset(self.cols, &eval.gradient_y)))
    }
}

fn combine(a: &[f64], b: &[f64], alpha: f64, beta: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| alpha * x + beta * y).collect()
}

struct Finalized {
    x: Vec<f64>,
    delta_norm: f64,
    delta_tolerance: f64,
    step_norm: f64,
}

/// Computes `x = Prox(ẑ − ∇Φ_I(ẑ))` and `δ̂` from fresh products.
fn finalize(
    reduced: &Reduced,
    spec: &RegularizerSpec,
    z_hat: &[f64],
    cfg: &InnerConfig,
) -> Result<Finalized> {
    let (_, g_hat) = reduced.value_grad(&reduced.forward(z_hat))?;
    let shifted = combine(z_hat, &g_hat, 1.0, -1.0);
    let x = prox(spec, &shifted, 1.0)?;
    let (_, g_x) = reduced.value_grad(&reduced.forward(&x))?;
    let delta: Vec<f64> = (0..x.len())
        .map(|i| z_hat[i] - x[i] + g_x[i] - g_hat[i])
        .collect();
    let delta_tolerance = match cfg.tolerance {
        Tolerance::Absolute => cfg.epsilon_outer,
        Tolerance::Relative => cfg.epsilon_outer * (1.0 + norm2(&x) + norm2(&g_x)),
    };
    Ok(Finalized {
        step_norm: dist2(z_hat, &x),
        delta_norm: norm2(&delta),
        delta_tolerance,
        x,
    })
}

/// Solves the reduced problem on `I` from `z_init`.
///
/// Stops when the unit-step residual at the current point `ẑ` is at most
/// `tol/(1 + L)` (which forces `‖δ̂‖ ≤ tol`), or earlier when the finalized
/// `δ̂` already meets `tol`. After `max_iters` the best iterate is finalized
/// anyway and `converged` is false.
pub fn solve_reduced(
    problem: &ProblemData,
    spec_restricted: &RegularizerSpec,
    set: &IndexSet,
    z_init: &[f64],
    cfg: &InnerConfig,
) -> Result<InnerResult> {
    check_len("reduced start point", set.len(), z_init.len())?;
    check_len("reduced regularizer", set.len(), spec_restricted.dim())?;
    if cfg.max_iters == 0 {
        return Err(SieveError::InvalidInput("max_iters must be at least 1".into()));
    }
    if cfg.epsilon_outer.is_nan() || cfg.epsilon_outer <= 0.0 {
        return Err(SieveError::InvalidInput("inner tolerance must be positive".into()));
    }
    if z_init.iter().any(|v| !v.is_finite()) {
        return Err(SieveError::InvalidInput("non-finite start point".into()));
    }
    if set.is_empty() {
        return Ok(InnerResult {
            x_support: Vec::new(),
            delta_norm: 0.0,
            delta_tolerance: cfg.epsilon_outer,
            step_norm: 0.0,
            lipschitz: 0.0,
            iterations: 0,
            converged: true,
            restarts: 0,
        });
    }
    let reduced = Reduced {
        problem,
        cols: set.as_slice(),
    };
    let lipschitz = lipschitz_bound(problem, set)?.max(f64::MIN_POSITIVE);
    let mut step_l = if cfg.use_lipschitz {
        lipschitz
    } else {
        lipschitz_estimate(problem, set, 5)?.max(f64::MIN_POSITIVE)
    };
    let momentum = cfg.backend == InnerBackend::Apg;

    let objective = |az: &[f64], z: &[f64]| -> Result<f64> {
        Ok(reduced.value(az)? + spec_restricted.evaluate(z)?)
    };

    let mut x = z_init.to_vec();
    let mut ax = reduced.forward(&x);
    let mut fx = objective(&ax, &x)?;
    let mut y = x.clone();
    let mut ay = ax.clone();
    let mut theta = 1.0f64;
    let mut restarts = 0;
    let (mut best_x, mut best_f) = (x.clone(), fx);

    for iter in 1..=cfg.max_iters {
        let (hy, gy) = reduced.value_grad(&ay)?;

        // stopping test at ẑ = y
        let unit = prox(spec_restricted, &combine(&y, &gy, 1.0, -1.0), 1.0)?;
        let res = dist2(&y, &unit);
        let scale_hint = match cfg.tolerance {
            Tolerance::Absolute => 1.0,
            Tolerance::Relative => 1.0 + norm2(&unit) + norm2(&gy),
        };
        let tol_hint = cfg.epsilon_outer * scale_hint;
        // the sufficient test from the (1 + L) bound, plus a periodic direct
        // check of δ̂, which is often met long before the bound is
        if res <= tol_hint / (1.0 + lipschitz) || (res <= tol_hint && iter % 10 == 1) {
            let fin = finalize(&reduced, spec_restricted, &y, cfg)?;
            if fin.delta_norm <= fin.delta_tolerance {
                return Ok(InnerResult {
                    x_support: fin.x,
                    delta_norm: fin.delta_norm,
                    delta_tolerance: fin.delta_tolerance,
                    step_norm: fin.step_norm,
                    lipschitz,
                    iterations: iter,
                    converged: true,
                    restarts,
                });
            }
        }

        // proximal gradient step from y, with backtracking when requested
        let (x_new, ax_new) = loop {
            let cand = prox(
                spec_restricted,
                &combine(&y, &gy, 1.0, -1.0 / step_l),
                1.0 / step_l,
            )?;
            let a_cand = reduced.forward(&cand);
            if cfg.use_lipschitz {
                break (cand, a_cand);
            }
            let d = combine(&cand, &y, 1.0, -1.0);
            let model = hy
                + d.iter().zip(&gy).map(|(a, b)| a * b).sum::<f64>()
                + 0.5 * step_l * d.iter().map(|v| v * v).sum::<f64>();
            if reduced.value(&a_cand)? <= model * (1.0 + 1e-14) + 1e-300 {
                break (cand, a_cand);
            }
            step_l *= 2.0;
        };
        let f_new = objective(&ax_new, &x_new)?;

        // a step from y = x is a plain proximal-gradient step and is always kept,
        // so rounding-level increases near the optimum cannot stall the loop
        if momentum && theta > 1.0 && f_new > fx {
            // restart: drop momentum and take the next step from x
            restarts += 1;
            theta = 1.0;
            y.clone_from(&x);
            ay.clone_from(&ax);
            continue;
        }

        let (beta, theta_next) = if momentum {
            let tn = 0.5 * (1.0 + (1.0 + 4.0 * theta * theta).sqrt());
            ((theta - 1.0) / tn, tn)
        } else {
            (0.0, 1.0)
        };
        y = combine(&x_new, &x, 1.0 + beta, -beta);
        ay = combine(&ax_new, &ax, 1.0 + beta, -beta);
        theta = theta_next;
        x = x_new;
        ax = ax_new;
        fx = f_new;
        if fx < best_f {
            best_f = fx;
            best_x.clone_from(&x);
        }
    }

    let fin = finalize(&reduced, spec_restricted, &best_x, cfg)?;
    Ok(InnerResult {
        converged: fin.delta_norm <= fin.delta_tolerance,
        x_support: fin.x,
        delta_norm: fin.delta_norm,
        delta_tolerance: fin.delta_tolerance,
        step_norm: fin.step_norm,
        lipschitz,
        iterations: cfg.max_iters,
        restarts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::DenseMatrix;
    use crate::residual::objective;
    use crate::testutil::{random_problem, random_specs};
    use crate::{embed, LossKind};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn absolute(eps: f64) -> InnerConfig {
        InnerConfig {
            epsilon_outer: eps,
            tolerance: Tolerance::Absolute,
            ..InnerConfig::default()
        }
    }

    fn check_contract(res: &InnerResult) {
        assert!(res.delta_norm <= (1.0 + res.lipschitz) * res.step_norm + 1e-12);
        if res.converged {
            assert!(res.delta_norm <= res.delta_tolerance);
        }
    }

    #[test]
    fn zero_start_is_accepted_at_once_above_lambda_max() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = random_problem(&mut rng, 10, 12, LossKind::LeastSquares);
        let set = IndexSet::new(vec![1, 4, 7], 12).unwrap();
        let spec = RegularizerSpec::lasso(3, p.lambda_scale()).unwrap();
        let res = solve_reduced(&p, &spec, &set, &[0.0; 3], &absolute(1e-8)).unwrap();
        assert_eq!(res.x_support, vec![0.0; 3]);
        assert_eq!(res.iterations, 1);
        assert_eq!(res.delta_norm, 0.0);
        assert!(res.converged);
    }

    #[test]
    fn scalar_problem() {
        // ½(z − 3)² + |z| is minimized at 2
        let a = DenseMatrix::from_rows(&[vec![1.0]]).unwrap();
        let p = ProblemData::new(a, vec![3.0], LossKind::LeastSquares).unwrap();
        let spec = RegularizerSpec::lasso(1, 1.0).unwrap();
        for backend in [InnerBackend::Apg, InnerBackend::ProxGrad] {
            let cfg = InnerConfig {
                backend,
                ..absolute(1e-12)
            };
            let res = solve_reduced(&p, &spec, &IndexSet::full(1), &[0.0], &cfg).unwrap();
            assert!((res.x_support[0] - 2.0).abs() < 1e-12, "{res:?}");
            check_contract(&res);
        }
    }

    #[test]
    fn matches_tight_reference_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for loss in [LossKind::LeastSquares, LossKind::Logistic] {
            let p = random_problem(&mut rng, 40, 80, loss);
            let set = IndexSet::new((0..80).step_by(4).chain(1..20).collect::<std::collections::BTreeSet<_>>().into_iter().collect(), 80).unwrap();
            let lam = 0.2 * p.lambda_scale();
            for spec in random_specs(&mut rng, 80) {
                let spec = spec.scaled(lam).unwrap().restrict(&set).unwrap();
                let z0 = vec![0.0; set.len()];
                let tight = solve_reduced(&p, &spec, &set, &z0, &InnerConfig {
                    max_iters: 200_000,
                    ..absolute(1e-12)
                })
                .unwrap();
                let loose = solve_reduced(&p, &spec, &set, &z0, &absolute(1e-6)).unwrap();
                check_contract(&tight);
                check_contract(&loose);
                assert!(loose.converged, "{}: {loose:?}", spec.penalty().name());
                let full_spec_obj = |z: &[f64]| {
                    crate::losses::phi_value(&p, z, &set).unwrap() + spec.evaluate(z).unwrap()
                };
                let (ft, fl) = (full_spec_obj(&tight.x_support), full_spec_obj(&loose.x_support));
                assert!((fl - ft).abs() <= 1e-6 * (1.0 + ft.abs()), "{} {fl} vs {ft}", spec.penalty().name());
            }
        }
    }

    #[test]
    fn proximal_gradient_with_backtracking() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p = random_problem(&mut rng, 30, 20, LossKind::LeastSquares);
        let set = IndexSet::full(20);
        let spec = RegularizerSpec::lasso(20, 0.1 * p.lambda_scale()).unwrap();
        let reference = solve_reduced(&p, &spec, &set, &[0.0; 20], &absolute(1e-10)).unwrap();
        for use_lipschitz in [true, false] {
            let cfg = InnerConfig {
                backend: InnerBackend::ProxGrad,
                use_lipschitz,
                max_iters: 100_000,
                ..absolute(1e-8)
            };
            let res = solve_reduced(&p, &spec, &set, &[0.0; 20], &cfg).unwrap();
            check_contract(&res);
            assert!(res.converged);
            let x = embed(&res.x_support, &set, 20).unwrap();
            let xr = embed(&reference.x_support, &set, 20).unwrap();
            let (f, fr) = (objective(&p, &spec, &x).unwrap(), objective(&p, &spec, &xr).unwrap());
            assert!((f - fr).abs() <= 1e-7 * (1.0 + fr.abs()));
        }
    }

    #[test]
    fn iteration_cap_reports_nonconvergence() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let p = random_problem(&mut rng, 30, 40, LossKind::Logistic);
        let spec = RegularizerSpec::lasso(40, 1e-3 * p.lambda_scale()).unwrap();
        let cfg = InnerConfig {
            max_iters: 3,
            ..absolute(1e-14)
        };
        let res = solve_reduced(&p, &spec, &IndexSet::full(40), &[0.0; 40], &cfg).unwrap();
        assert!(!res.converged);
        assert_eq!(res.iterations, 3);
        check_contract(&res);
    }

    #[test]
    fn relative_tolerance_scales_with_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = random_problem(&mut rng, 25, 15, LossKind::LeastSquares);
        let spec = RegularizerSpec::lasso(15, 0.05 * p.lambda_scale()).unwrap();
        let res = solve_reduced(&p, &spec, &IndexSet::full(15), &[0.0; 15], &InnerConfig::default()).unwrap();
        assert!(res.converged);
        let x = &res.x_support;
        let g = crate::losses::phi_gradient(&p, x, &IndexSet::full(15)).unwrap();
        let scale = 1.0 + norm2(x) + norm2(&g);
        assert!((res.delta_tolerance - 1e-6 * scale).abs() < 1e-15 * scale);
        check_contract(&res);
    }

    #[test]
    fn rejects_bad_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let p = random_problem(&mut rng, 5, 4, LossKind::LeastSquares);
        let spec = RegularizerSpec::lasso(2, 1.0).unwrap();
        let set = IndexSet::new(vec![0, 3], 4).unwrap();
        assert!(solve_reduced(&p, &spec, &set, &[0.0], &InnerConfig::default()).is_err());
        assert!(solve_reduced(&p, &spec, &set, &[f64::NAN, 0.0], &InnerConfig::default()).is_err());
        let zero_iters = InnerConfig {
            max_iters: 0,
            ..InnerConfig::default()
        };
        assert!(solve_reduced(&p, &spec, &set, &[0.0, 0.0], &zero_iters).is_err());
        let empty = solve_reduced(&p, &spec.restrict(&IndexSet::empty()).unwrap(), &IndexSet::empty(), &[], &InnerConfig::default()).unwrap();
        assert!(empty.converged && empty.x_support.is_empty());
    }
}

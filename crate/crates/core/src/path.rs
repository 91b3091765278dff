//! Regularization paths over a decreasing λ grid.
//!
//! [`generate_path`] seeds each sieve run with the thresholded support of the
//! previous solution. [`warmstart_path`] and [`ssr_path`] are the comparison
//! baselines: full-dimension warm-started solves, and sequential strong-rule
//! screening followed by a single reduced solve (Lasso least squares only).

use std::time::Instant;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{check_len, Result, SieveError};
use crate::inner::InnerConfig;
use crate::matrix::norm_inf;
use crate::model::{GroupPartition, IndexSet, LossKind, Penalty, ProblemData, RegularizerSpec};
use crate::residual::{objective, residual};
use crate::sieve::{
    full_solve, initial_index_set, sieve_solve, InitialSet, SieveConfig, SieveReport, Termination,
};

/// Default threshold defining the active set `{j : |x_j| > ε̂}`.
pub const DEFAULT_EPS_HAT: f64 = 1e-10;

/// Strictly decreasing positive penalty levels, with the grid coefficients
/// `c_i = λ_i / scale` when the grid was built from a scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaGrid {
    values: Vec<f64>,
    coefficients: Option<Vec<f64>>,
}

impl LambdaGrid {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        validate_decreasing("lambda grid", &values)?;
        Ok(Self {
            values,
            coefficients: None,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn coefficients(&self) -> Option<&[f64]> {
        self.coefficients.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn validate_decreasing(what: &str, values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(SieveError::InvalidInput(format!("{what} is empty")));
    }
    if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(SieveError::InvalidInput(format!(
            "{what} entries must be positive and finite, got {v}"
        )));
    }
    if let Some(i) = values.windows(2).position(|w| w[1] >= w[0]) {
        return Err(SieveError::InvalidInput(format!(
            "{what} must be strictly decreasing (entry {} ≥ entry {i})",
            i + 1
        )));
    }
    Ok(())
}

/// `λ_i = c_i·scale`, with `log10 c_i` evenly spaced from `log10 c_hi` to
/// `log10 c_lo` over `count` points. Endpoints are exactly `c_hi` and `c_lo`.
pub fn lambda_grid_log10(scale: f64, c_hi: f64, c_lo: f64, count: usize) -> Result<LambdaGrid> {
    if !(c_lo > 0.0 && c_hi > c_lo && c_hi.is_finite()) {
        return Err(SieveError::InvalidInput(format!(
            "grid range needs c_hi > c_lo > 0, got c_hi={c_hi}, c_lo={c_lo}"
        )));
    }
    if count < 2 {
        return Err(SieveError::InvalidInput(format!(
            "grid needs at least 2 points, got {count}"
        )));
    }
    if !(scale.is_finite() && scale > 0.0) {
        return Err(SieveError::InvalidInput(format!(
            "grid scale must be positive, got {scale} (is the response zero?)"
        )));
    }
    let (lo, hi) = (c_lo.log10(), c_hi.log10());
    let last = count - 1;
    let coefficients: Vec<f64> = (0..count)
        .map(|i| match i {
            0 => c_hi,
            i if i == last => c_lo,
            i => 10f64.powf(hi + (lo - hi) * i as f64 / last as f64),
        })
        .collect();
    let values: Vec<f64> = coefficients.iter().map(|c| c * scale).collect();
    validate_decreasing("lambda grid", &values)?;
    Ok(LambdaGrid {
        values,
        coefficients: Some(coefficients),
    })
}

/// A one-parameter family `λ ↦ λ·base`, where `base` is the regularizer at `λ = 1`.
///
/// For SLOPE the whole weight sequence scales jointly; for elastic net and
/// sparse group lasso both parameters keep their ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularizerFamily {
    base: RegularizerSpec,
}

impl RegularizerFamily {
    pub fn new(base: RegularizerSpec) -> Self {
        Self { base }
    }

    pub fn lasso(n: usize) -> Result<Self> {
        Ok(Self::new(RegularizerSpec::lasso(n, 1.0)?))
    }

    /// `λ‖x‖₁ + ratio·λ‖x‖²`.
    pub fn elastic_net(n: usize, ratio: f64) -> Result<Self> {
        Ok(Self::new(RegularizerSpec::elastic_net(n, 1.0, ratio)?))
    }

    /// Weights `w_l = √|G_l|` and `λ2 = λ1 / w_max`.
    pub fn sparse_group_lasso(partition: GroupPartition) -> Result<Self> {
        let weights: Vec<f64> = partition
            .groups()
            .iter()
            .map(|g| (g.len() as f64).sqrt())
            .collect();
        let w_max = weights.iter().copied().fold(0.0, f64::max);
        Ok(Self::new(RegularizerSpec::sparse_group_lasso(
            1.0,
            1.0 / w_max,
            weights,
            partition,
        )?))
    }

    /// Unit weights.
    pub fn exclusive_lasso(partition: GroupPartition) -> Result<Self> {
        let n = partition.dim();
        Ok(Self::new(RegularizerSpec::exclusive_lasso(
            1.0,
            vec![1.0; n],
            partition,
        )?))
    }

    /// SLOPE with the Benjamini–Hochberg sequence `Φ⁻¹(1 − i·q/(2n))`,
    /// normalized so the first weight is 1.
    pub fn slope_bh(n: usize, q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(SieveError::InvalidInput(format!(
                "SLOPE level q must lie in (0, 1), got {q}"
            )));
        }
        let normal = Normal::standard();
        let raw: Vec<f64> = (1..=n)
            .map(|i| normal.inverse_cdf(1.0 - i as f64 * q / (2.0 * n as f64)))
            .collect();
        let first = raw[0];
        let weights = raw.iter().map(|w| (w / first).max(0.0)).collect();
        Ok(Self::new(RegularizerSpec::slope(weights)?))
    }

    pub fn base(&self) -> &RegularizerSpec {
        &self.base
    }

    pub fn at(&self, lambda: f64) -> Result<RegularizerSpec> {
        self.base.scaled(lambda)
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathMethod {
    Sieve,
    WarmStart,
    StrongRule,
}

impl PathMethod {
    pub fn name(self) -> &'static str {
        match self {
            PathMethod::Sieve => "as",
            PathMethod::WarmStart => "warmstart",
            PathMethod::StrongRule => "ssr",
        }
    }
}

/// One solved grid point. The solution is stored sparsely over its exact support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathEntry {
    pub lambda: f64,
    pub support: IndexSet,
    pub values: Vec<f64>,
    /// `|{j : x_j ≠ 0}|`
    pub nnz: usize,
    /// `{j : |x_j| > ε̂}`
    pub active_set: IndexSet,
    pub initial_set_size: usize,
    pub eta_kkt: f64,
    pub residual_norm: f64,
    pub criterion_value: f64,
    pub objective: f64,
    pub rounds: usize,
    /// `|I|` of every reduced problem solved at this λ.
    pub reduced_dims: Vec<usize>,
    pub inner_iterations: usize,
    pub terminated_by: Termination,
    pub wall_time_s: f64,
    /// Features kept by screening, for the strong-rule baseline.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub screened: Option<IndexSet>,
}

impl PathEntry {
    pub fn from_report(
        lambda: f64,
        report: &SieveReport,
        objective: f64,
        initial_set_size: usize,
        eps_hat: f64,
    ) -> Self {
        let support = IndexSet::support(&report.x, 0.0);
        Self {
            lambda,
            values: support.iter().map(|j| report.x[j]).collect(),
            nnz: support.len(),
            support,
            active_set: IndexSet::support(&report.x, eps_hat),
            initial_set_size,
            eta_kkt: report.eta_kkt,
            residual_norm: report.residual_norm,
            criterion_value: report.criterion_value,
            objective,
            rounds: report.rounds,
            reduced_dims: report.reduced_dims().collect(),
            inner_iterations: report.inner_iterations(),
            terminated_by: report.terminated_by,
            wall_time_s: report.wall_time_s,
            screened: None,
        }
    }

    /// The dense solution of length `n`.
    pub fn x(&self, n: usize) -> Vec<f64> {
        let mut x = vec![0.0; n];
        for (j, v) in self.support.iter().zip(&self.values) {
            x[j] = *v;
        }
        x
    }

    pub fn flagged(&self) -> bool {
        self.terminated_by != Termination::Tolerance
    }

    pub fn avg_reduced_dim(&self) -> f64 {
        mean(&self.reduced_dims)
    }

    pub fn max_reduced_dim(&self) -> usize {
        self.reduced_dims.iter().copied().max().unwrap_or(0)
    }
}

fn mean(v: &[usize]) -> f64 {
    if v.is_empty() {
        0.0
    } else {
        v.iter().sum::<usize>() as f64 / v.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathReport {
    pub method: PathMethod,
    pub entries: Vec<PathEntry>,
    pub eps_hat: f64,
    pub wall_time_s: f64,
}

impl PathReport {
    pub fn lambdas(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.lambda).collect()
    }

    pub fn any_flagged(&self) -> bool {
        self.entries.iter().any(PathEntry::flagged)
    }

    /// Total sieving rounds over the path ("S. Rnd").
    pub fn total_rounds(&self) -> usize {
        self.entries.iter().map(|e| e.rounds).sum()
    }

    /// Mean `|I|` over every reduced problem solved along the path.
    pub fn avg_reduced_dim(&self) -> f64 {
        let all: Vec<usize> = self
            .entries
            .iter()
            .flat_map(|e| e.reduced_dims.iter().copied())
            .collect();
        mean(&all)
    }

    pub fn max_reduced_dim(&self) -> usize {
        self.entries
            .iter()
            .map(PathEntry::max_reduced_dim)
            .max()
            .unwrap_or(0)
    }
}

/// Keeps `x_prev` only on `set`, so it is a valid start for a run seeded with `set`.
fn restrict_start(x_prev: &[f64], set: &IndexSet) -> Vec<f64> {
    let mut x = vec![0.0; x_prev.len()];
    for j in set.iter() {
        x[j] = x_prev[j];
    }
    x
}

fn check_family(problem: &ProblemData, family: &RegularizerFamily) -> Result<()> {
    check_len("regularizer family dimension", problem.n(), family.dim())
}

/// Sieving path: `I⁰(λ_0)` from the correlation test, then
/// `I⁰(λ_i) = {j : |x*(λ_{i−1})_j| > ε̂}` with the previous solution as the start.
/// An empty previous active set falls back to the correlation test.
/// Runs that hit the round cap are kept and flagged.
pub fn generate_path(
    problem: &ProblemData,
    family: &RegularizerFamily,
    grid: &LambdaGrid,
    cfg: &SieveConfig,
    inner: &InnerConfig,
    eps_hat: f64,
) -> Result<PathReport> {
    check_family(problem, family)?;
    if eps_hat.is_nan() || eps_hat < 0.0 {
        return Err(SieveError::InvalidInput(format!(
            "eps_hat must be nonnegative, got {eps_hat}"
        )));
    }
    let start = Instant::now();
    let n = problem.n();
    let auto = initial_index_set(problem, cfg.init_k)?;
    let mut entries: Vec<PathEntry> = Vec::with_capacity(grid.len());
    let mut prev_x = vec![0.0; n];
    for &lambda in grid.values() {
        let spec = family.at(lambda)?;
        let seed = match entries.last() {
            Some(e) if !e.active_set.is_empty() => e.active_set.clone(),
            _ => auto.clone(),
        };
        let x0 = restrict_start(&prev_x, &seed);
        let report = sieve_solve(
            problem,
            &spec,
            &InitialSet::Given(seed.clone()),
            cfg,
            inner,
            Some(&x0),
        )?;
        let obj = objective(problem, &spec, &report.x)?;
        entries.push(PathEntry::from_report(lambda, &report, obj, seed.len(), eps_hat));
        prev_x = report.x;
    }
    Ok(PathReport {
        method: PathMethod::Sieve,
        entries,
        eps_hat,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Warm-start baseline: every solve runs on all `n` coordinates, started from
/// the previous solution.
pub fn warmstart_path(
    problem: &ProblemData,
    family: &RegularizerFamily,
    grid: &LambdaGrid,
    cfg: &SieveConfig,
    inner: &InnerConfig,
) -> Result<PathReport> {
    check_family(problem, family)?;
    let start = Instant::now();
    let n = problem.n();
    let mut entries = Vec::with_capacity(grid.len());
    let mut prev_x = vec![0.0; n];
    for &lambda in grid.values() {
        let spec = family.at(lambda)?;
        let report = full_solve(problem, &spec, cfg, inner, Some(&prev_x))?;
        let obj = objective(problem, &spec, &report.x)?;
        entries.push(PathEntry::from_report(lambda, &report, obj, n, DEFAULT_EPS_HAT));
        prev_x = report.x;
    }
    Ok(PathReport {
        method: PathMethod::WarmStart,
        entries,
        eps_hat: DEFAULT_EPS_HAT,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

fn lasso_lambda(problem: &ProblemData, family: &RegularizerFamily) -> Result<f64> {
    if problem.loss() != LossKind::LeastSquares {
        return Err(SieveError::Unsupported(format!(
            "the strong rule is only available for least squares, not {}",
            problem.loss().name()
        )));
    }
    match family.base().penalty() {
        Penalty::Lasso { lambda } => Ok(*lambda),
        other => Err(SieveError::Unsupported(format!(
            "the strong rule is only available for lasso, not {}",
            other.name()
        ))),
    }
}

/// Sequential strong rule for Lasso least squares: with `θ = b − A x_prev`,
/// keeps `{i : |a_iᵀθ| > 2λ_next − λ_prev}`. The rule is unsafe.
pub fn ssr_screen_lasso(
    problem: &ProblemData,
    family: &RegularizerFamily,
    x_prev: &[f64],
    lambda_prev: f64,
    lambda_next: f64,
) -> Result<IndexSet> {
    check_family(problem, family)?;
    lasso_lambda(problem, family)?;
    check_len("strong rule previous solution", problem.n(), x_prev.len())?;
    let ax = problem.a().mul(x_prev);
    let theta: Vec<f64> = problem.b().iter().zip(&ax).map(|(b, v)| b - v).collect();
    let corr = problem.a().tmul(&theta);
    let cut = 2.0 * lambda_next - lambda_prev;
    IndexSet::new(
        (0..problem.n()).filter(|&i| corr[i].abs() > cut).collect(),
        problem.n(),
    )
}

/// Strong-rule baseline for Lasso least squares. At each λ the kept set comes
/// from the previous solution (`x = 0` at `λ_max = ‖Aᵀb‖∞` for the first point);
/// one reduced solve is run on it with no correction. Entries whose solution
/// fails the criterion are flagged `MaxRounds`.
pub fn ssr_path(
    problem: &ProblemData,
    family: &RegularizerFamily,
    grid: &LambdaGrid,
    cfg: &SieveConfig,
    inner: &InnerConfig,
) -> Result<PathReport> {
    let unit = lasso_lambda(problem, family)?;
    check_family(problem, family)?;
    let start = Instant::now();
    let n = problem.n();
    let mut prev_x = vec![0.0; n];
    let mut prev_lambda = norm_inf(&problem.a().tmul(problem.b()));
    let single = SieveConfig {
        max_rounds: Some(0),
        ..*cfg
    };
    let mut entries = Vec::with_capacity(grid.len());
    for &lambda in grid.values() {
        let spec = family.at(lambda)?;
        let effective = lambda * unit;
        let kept = ssr_screen_lasso(problem, family, &prev_x, prev_lambda, effective)?;
        let x0 = restrict_start(&prev_x, &kept);
        let report = sieve_solve(
            problem,
            &spec,
            &InitialSet::Given(kept.clone()),
            &single,
            inner,
            Some(&x0),
        )?;
        let obj = objective(problem, &spec, &report.x)?;
        let mut entry = PathEntry::from_report(lambda, &report, obj, kept.len(), DEFAULT_EPS_HAT);
        entry.screened = Some(kept);
        entries.push(entry);
        prev_x = report.x;
        prev_lambda = effective;
    }
    Ok(PathReport {
        method: PathMethod::StrongRule,
        entries,
        eps_hat: DEFAULT_EPS_HAT,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Features the strong rule discarded at each λ although the reference path
/// has them active there.
pub fn ssr_mistakes(ssr: &PathReport, reference: &PathReport) -> Result<Vec<usize>> {
    if ssr.entries.len() != reference.entries.len() {
        return Err(SieveError::DimensionMismatch {
            context: "path lengths",
            expected: reference.entries.len(),
            got: ssr.entries.len(),
        });
    }
    ssr.entries
        .iter()
        .zip(&reference.entries)
        .map(|(s, r)| {
            let kept = s.screened.as_ref().ok_or_else(|| {
                SieveError::InvalidInput("path entry carries no screened set".into())
            })?;
            Ok(r.active_set.iter().filter(|&j| !kept.contains(j)).count())
        })
        .collect()
}

/// Recomputes the residual of a stored entry, for auditing a report.
pub fn audit_entry(
    problem: &ProblemData,
    family: &RegularizerFamily,
    entry: &PathEntry,
) -> Result<f64> {
    let x = entry.x(problem.n());
    let spec = family.at(entry.lambda)?;
    Ok(residual(problem, &spec, &x, &entry.support)?.eta_kkt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::random_problem;
    use crate::GroupPartition;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn lasso_family(n: usize) -> RegularizerFamily {
        RegularizerFamily::new(RegularizerSpec::lasso(n, 1.0).unwrap())
    }

    #[test]
    fn default_families() {
        let bh = RegularizerFamily::slope_bh(4, 0.1).unwrap();
        let Penalty::Slope { weights } = bh.base().penalty() else {
            panic!("not slope")
        };
        assert_eq!(weights[0], 1.0);
        assert!(weights.windows(2).all(|w| w[1] <= w[0]));
        // Φ⁻¹(1 − 0.1/8) ≈ 2.2414, Φ⁻¹(1 − 0.4/8) ≈ 1.6449
        assert!((weights[3] - 1.644_853_6 / 2.241_402_7).abs() < 1e-6);
        assert!(RegularizerFamily::slope_bh(4, 1.0).is_err());

        let part = GroupPartition::new(vec![vec![0], vec![1, 2, 3, 4]], 5).unwrap();
        let sgl = RegularizerFamily::sparse_group_lasso(part.clone()).unwrap();
        let Penalty::SparseGroupLasso { l1, l2, weights, .. } = sgl.at(3.0).unwrap().penalty().clone() else {
            panic!("not sgl")
        };
        assert_eq!((l1, l2, weights), (3.0, 1.5, vec![1.0, 2.0]));
        let ex = RegularizerFamily::exclusive_lasso(part).unwrap();
        assert_eq!(ex.at(0.5).unwrap().evaluate(&[1.0, 1.0, 0.0, 0.0, -1.0]).unwrap(), 0.5 * (1.0 + 4.0));
    }

    #[test]
    fn default_grid_coefficients() {
        let g = lambda_grid_log10(2.0, 1e-1, 1e-4, 20).unwrap();
        let c = g.coefficients().unwrap();
        assert_eq!((c[0], c[19]), (1e-1, 1e-4));
        assert_eq!(g.values()[0], 0.2);
        let ratio = 10f64.powf(-3.0 / 19.0);
        for w in c.windows(2) {
            assert!((w[1] / w[0] - ratio).abs() < 1e-12);
        }
        for (i, ci) in c.iter().enumerate() {
            assert!((ci.log10() - (-1.0 - 3.0 * i as f64 / 19.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn grid_edge_cases() {
        let g = lambda_grid_log10(3.0, 0.5, 0.25, 2).unwrap();
        assert_eq!(g.values(), &[1.5, 0.75]);
        assert!(lambda_grid_log10(1.0, 0.1, 0.1, 5).is_err());
        assert!(lambda_grid_log10(1.0, 0.1, 0.2, 5).is_err());
        assert!(lambda_grid_log10(1.0, 0.1, 0.01, 1).is_err());
        assert!(lambda_grid_log10(0.0, 0.1, 0.01, 3).is_err());
        assert!(LambdaGrid::new(vec![1.0, 1.0]).is_err());
        assert!(LambdaGrid::new(vec![1.0, -1.0]).is_err());
    }

    #[test]
    fn path_from_lambda_max_uses_fallback() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = random_problem(&mut rng, 20, 100, LossKind::LeastSquares);
        let lmax = p.lambda_scale();
        let grid = LambdaGrid::new(vec![lmax, 0.5 * lmax, 0.2 * lmax]).unwrap();
        let cfg = SieveConfig::default();
        let rep = generate_path(&p, &lasso_family(100), &grid, &cfg, &InnerConfig::default(), DEFAULT_EPS_HAT).unwrap();
        assert_eq!(rep.entries[0].nnz, 0);
        assert!(rep.entries[0].active_set.is_empty());
        let auto = initial_index_set(&p, cfg.init_k).unwrap().len();
        assert_eq!(rep.entries[1].initial_set_size, auto);
        assert_eq!(rep.entries[2].initial_set_size, rep.entries[1].active_set.len());
        for e in &rep.entries {
            assert!(!e.flagged());
            assert!(e.eta_kkt <= 1e-6);
            assert_eq!(IndexSet::support(&e.x(100), rep.eps_hat), e.active_set);
            let audit = audit_entry(&p, &lasso_family(100), e).unwrap();
            assert!((audit - e.eta_kkt).abs() <= 1e-12);
        }
    }

    #[test]
    fn single_point_warm_start_equals_full_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = random_problem(&mut rng, 25, 40, LossKind::Logistic);
        let fam = lasso_family(40);
        let lam = 0.1 * p.lambda_scale();
        let grid = LambdaGrid::new(vec![lam]).unwrap();
        let (cfg, inner) = (SieveConfig::default(), InnerConfig::default());
        let ws = warmstart_path(&p, &fam, &grid, &cfg, &inner).unwrap();
        let full = full_solve(&p, &fam.at(lam).unwrap(), &cfg, &inner, Some(&vec![0.0; 40])).unwrap();
        assert_eq!(ws.entries[0].x(40), full.x);
    }

    #[test]
    fn strong_rule_degenerate_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = random_problem(&mut rng, 20, 30, LossKind::LeastSquares);
        let fam = lasso_family(30);
        let x = vec![0.0; 30];
        let corr = p.a().tmul(p.b());
        let lam = 0.4 * p.lambda_scale();
        let same = ssr_screen_lasso(&p, &fam, &x, lam, lam).unwrap();
        let expect: Vec<usize> = (0..30).filter(|&i| corr[i].abs() > lam).collect();
        assert_eq!(same.as_slice(), expect.as_slice());
        let all = ssr_screen_lasso(&p, &fam, &x, lam, lam / 2.0).unwrap();
        assert_eq!(all.len(), corr.iter().filter(|c| **c != 0.0).count());
    }

    #[test]
    fn strong_rule_is_lasso_least_squares_only() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let logit = random_problem(&mut rng, 10, 5, LossKind::Logistic);
        let x = vec![0.0; 5];
        assert!(matches!(
            ssr_screen_lasso(&logit, &lasso_family(5), &x, 1.0, 0.9),
            Err(SieveError::Unsupported(_))
        ));
        let ls = random_problem(&mut rng, 10, 5, LossKind::LeastSquares);
        let enet = RegularizerFamily::new(RegularizerSpec::elastic_net(5, 1.0, 0.5).unwrap());
        assert!(matches!(
            ssr_screen_lasso(&ls, &enet, &x, 1.0, 0.9),
            Err(SieveError::Unsupported(_))
        ));
    }

    #[test]
    fn strong_rule_path_reports_mistakes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = random_problem(&mut rng, 30, 80, LossKind::LeastSquares);
        let fam = lasso_family(80);
        let grid = lambda_grid_log10(p.lambda_scale(), 0.5, 0.05, 6).unwrap();
        let (cfg, inner) = (SieveConfig::default(), InnerConfig::default());
        let ssr = ssr_path(&p, &fam, &grid, &cfg, &inner).unwrap();
        let sieve = generate_path(&p, &fam, &grid, &cfg, &inner, DEFAULT_EPS_HAT).unwrap();
        let mistakes = ssr_mistakes(&ssr, &sieve).unwrap();
        assert_eq!(mistakes.len(), 6);
        for (e, k) in ssr.entries.iter().zip(&mistakes) {
            // a correct screen reproduces the solution; a wrong one leaves a residual
            if *k > 0 {
                assert!(e.flagged());
            }
        }
        assert!(ssr_mistakes(&sieve, &sieve).is_err());
    }
}

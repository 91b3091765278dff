//! The adaptive sieving outer loop.
//!
//! Starting from a small index set `I⁰`, solve the problem restricted to
//! `x_{Ī} = 0`, evaluate the full proximal residual, and while the termination
//! criterion fails add the (at most `k_max`) outside coordinates with the
//! largest nonzero residual entries. Indices are only ever added.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Result, SieveError};
use crate::inner::{InnerConfig, InnerResult, ReducedSolver, Tolerance};
use crate::matrix::norm2;
use crate::model::{embed, extract, IndexSet, ProblemData, RegularizerSpec};
use crate::residual::{residual, Criterion, ResidualReport};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SieveConfig {
    pub epsilon: f64,
    pub k_max: usize,
    pub init_k: usize,
    pub criterion: Criterion,
    /// Safety cap on expansion rounds; `None` means `n`.
    pub max_rounds: Option<usize>,
}

impl Default for SieveConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-6,
            k_max: 500,
            init_k: 10,
            criterion: Criterion::RelativeKkt,
            max_rounds: None,
        }
    }
}

impl SieveConfig {
    fn validate(&self) -> Result<()> {
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(SieveError::InvalidInput(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.k_max == 0 || self.init_k == 0 {
            return Err(SieveError::InvalidInput("k_max and init_k must be at least 1".into()));
        }
        Ok(())
    }

    /// Inner solver settings whose error-vector bound matches this criterion.
    pub fn inner_for(&self, inner: &InnerConfig) -> InnerConfig {
        InnerConfig {
            epsilon_outer: self.epsilon,
            tolerance: match self.criterion {
                Criterion::ResidualNorm => Tolerance::Absolute,
                Criterion::RelativeKkt => Tolerance::Relative,
            },
            ..*inner
        }
    }
}

/// How the initial index set is chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialSet {
    /// Correlation test with `init_k·⌈√n⌉` features.
    Auto,
    Given(IndexSet),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Tolerance,
    MaxRounds,
}

/// Inner-solve statistics kept per round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnerSummary {
    pub iterations: usize,
    pub converged: bool,
    pub delta_norm: f64,
    pub delta_tolerance: f64,
    pub step_norm: f64,
    pub lipschitz: f64,
}

impl From<&InnerResult> for InnerSummary {
    fn from(r: &InnerResult) -> Self {
        Self {
            iterations: r.iterations,
            converged: r.converged,
            delta_norm: r.delta_norm,
            delta_tolerance: r.delta_tolerance,
            step_norm: r.step_norm,
            lipschitz: r.lipschitz,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    /// `|I^s|` for the reduced problem solved in this round.
    pub i_size: usize,
    /// `|J^s|`, the outside coordinates with nonzero residual that triggered this
    /// round (0 for the initial solve).
    pub j_size: usize,
    pub added: IndexSet,
    pub residual_norm: f64,
    pub eta_kkt: f64,
    pub inner: InnerSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SieveReport {
    pub x: Vec<f64>,
    /// Final index set; `x` is exactly zero outside it.
    pub index_set: IndexSet,
    /// Number of expansion rounds after the initial solve.
    pub rounds: usize,
    pub per_round: Vec<RoundRecord>,
    pub terminated_by: Termination,
    pub residual_norm: f64,
    pub eta_kkt: f64,
    pub criterion: Criterion,
    pub criterion_value: f64,
    pub wall_time_s: f64,
}

impl SieveReport {
    /// Sizes of every reduced problem solved.
    pub fn reduced_dims(&self) -> impl Iterator<Item = usize> + '_ {
        self.per_round.iter().map(|r| r.i_size)
    }

    pub fn avg_reduced_dim(&self) -> f64 {
        let n = self.per_round.len().max(1) as f64;
        self.reduced_dims().sum::<usize>() as f64 / n
    }

    pub fn max_reduced_dim(&self) -> usize {
        self.reduced_dims().max().unwrap_or(0)
    }

    pub fn inner_iterations(&self) -> usize {
        self.per_round.iter().map(|r| r.inner.iterations).sum()
    }
}

/// Correlation-test initialization: the `min(n, init_k·⌈√n⌉)` features with the
/// largest `|⟨a_i, b⟩| / (‖a_i‖‖b‖)`, ties broken by smaller index. Zero columns
/// score 0; a zero response returns the first indices.
pub fn initial_index_set(problem: &ProblemData, init_k: usize) -> Result<IndexSet> {
    if init_k == 0 {
        return Err(SieveError::InvalidInput("init_k must be at least 1".into()));
    }
    let n = problem.n();
    let root = (n as f64).sqrt().ceil() as usize;
    let count = n.min(init_k.saturating_mul(root));
    let b_norm = norm2(problem.b());
    if b_norm == 0.0 {
        return IndexSet::new((0..count).collect(), n);
    }
    let inner = problem.a().tmul(problem.b());
    let norms = problem.a().column_norms();
    let scores: Vec<f64> = inner
        .iter()
        .zip(&norms)
        .map(|(ip, na)| if *na == 0.0 { 0.0 } else { ip.abs() / (na * b_norm) })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| scores[j].total_cmp(&scores[i]).then(i.cmp(&j)));
    order.truncate(count);
    IndexSet::from_unsorted(order, n)
}

/// The additions `Ĵ`: among `j ∉ I` with `r_j ≠ 0`, the `min(|J|, k_max)` with the
/// largest `|r_j|` (ties by smaller index). Also returns `|J|`.
///
/// An empty `J` is only possible when the reduced solve violated its error bound,
/// so it is reported as a consistency error.
pub fn expand_index_set(r: &[f64], set: &IndexSet, k_max: usize) -> Result<(IndexSet, usize)> {
    if k_max == 0 {
        return Err(SieveError::InvalidInput("k_max must be at least 1".into()));
    }
    let n = r.len();
    let mut candidates: Vec<usize> = set
        .complement(n)
        .iter()
        .filter(|&j| r[j].abs() > 0.0)
        .collect();
    let j_size = candidates.len();
    if j_size == 0 {
        return Err(SieveError::Consistency(
            "residual vanishes outside the index set while the termination criterion fails; \
             the reduced solve did not meet its error bound"
                .into(),
        ));
    }
    candidates.sort_by(|&i, &j| r[j].abs().total_cmp(&r[i].abs()).then(i.cmp(&j)));
    candidates.truncate(k_max.min(j_size));
    Ok((IndexSet::from_unsorted(candidates, n)?, j_size))
}

/// Runs the sieving loop with the built-in first-order inner solver.
pub fn sieve_solve(
    problem: &ProblemData,
    spec: &RegularizerSpec,
    initial: &InitialSet,
    cfg: &SieveConfig,
    inner: &InnerConfig,
    x_init: Option<&[f64]>,
) -> Result<SieveReport> {
    sieve_solve_with(problem, spec, initial, cfg, &cfg.inner_for(inner), x_init)
}

/// Runs the sieving loop with any reduced-problem solver.
///
/// The solver is expected to meet an error bound compatible with `cfg`; if it
/// does not, the loop may stop with a consistency error.
pub fn sieve_solve_with<S: ReducedSolver>(
    problem: &ProblemData,
    spec: &RegularizerSpec,
    initial: &InitialSet,
    cfg: &SieveConfig,
    solver: &S,
    x_init: Option<&[f64]>,
) -> Result<SieveReport> {
    let start = Instant::now();
    cfg.validate()?;
    let n = problem.n();
    check_len("regularizer dimension", n, spec.dim())?;
    let mut set = match initial {
        InitialSet::Auto => initial_index_set(problem, cfg.init_k)?,
        InitialSet::Given(s) => {
            if s.min_dim() > n {
                return Err(SieveError::InvalidInput(
                    "initial index set exceeds problem dimension".into(),
                ));
            }
            s.clone()
        }
    };
    let mut z = match x_init {
        Some(x0) => {
            check_len("initial point", n, x0.len())?;
            if let Some(j) = (0..n).find(|&j| x0[j] != 0.0 && !set.contains(j)) {
                return Err(SieveError::InvalidInput(format!(
                    "initial point has a nonzero at {j}, outside the initial index set"
                )));
            }
            extract(x0, &set)?
        }
        None => vec![0.0; set.len()],
    };
    let max_rounds = cfg.max_rounds.unwrap_or(n);

    let mut per_round = Vec::new();
    let (mut x, mut report, mut inner_res) = solve_round(problem, spec, &set, &z, solver)?;
    let mut j_size = 0;
    let mut added = IndexSet::empty();
    let mut rounds = 0;

    let terminated_by = loop {
        per_round.push(RoundRecord {
            i_size: set.len(),
            j_size,
            added: added.clone(),
            residual_norm: report.norm,
            eta_kkt: report.eta_kkt,
            inner: InnerSummary::from(&inner_res),
        });
        if report.value(cfg.criterion) <= cfg.epsilon {
            break Termination::Tolerance;
        }
        if rounds >= max_rounds {
            break Termination::MaxRounds;
        }
        let (additions, js) = expand_index_set(&report.r, &set, cfg.k_max)?;
        set = set.union(&additions);
        j_size = js;
        added = additions;
        // warm start from the previous iterate restricted to the grown set
        z = extract(&x, &set)?;
        (x, report, inner_res) = solve_round(problem, spec, &set, &z, solver)?;
        rounds += 1;
    };

    Ok(SieveReport {
        residual_norm: report.norm,
        eta_kkt: report.eta_kkt,
        criterion: cfg.criterion,
        criterion_value: report.value(cfg.criterion),
        x,
        index_set: set,
        rounds,
        per_round,
        terminated_by,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

fn solve_round<S: ReducedSolver>(
    problem: &ProblemData,
    spec: &RegularizerSpec,
    set: &IndexSet,
    z_init: &[f64],
    solver: &S,
) -> Result<(Vec<f64>, ResidualReport, InnerResult)> {
    let restricted = spec.restrict(set)?;
    let res = solver.solve(problem, &restricted, set, z_init)?;
    let x = embed(&res.x_support, set, problem.n())?;
    let report = residual(problem, spec, &x, set)?;
    Ok((x, report, res))
}

/// Solves on the full index set, without sieving.
pub fn full_solve(
    problem: &ProblemData,
    spec: &RegularizerSpec,
    cfg: &SieveConfig,
    inner: &InnerConfig,
    x_init: Option<&[f64]>,
) -> Result<SieveReport> {
    sieve_solve(
        problem,
        spec,
        &InitialSet::Given(IndexSet::full(problem.n())),
        cfg,
        inner,
        x_init,
    )
}

//! Adaptive sieving for sparse convex composite problems `min h(Ax) + P(x)`.
//!
//! The crate is organised bottom-up:
//!
//! - [`matrix`], [`model`]: dense design matrices, problem data, regularizers
//!   and index-set algebra.
//! - [`losses`]: least-squares and logistic losses, gradients and smoothness bounds.
//! - [`prox`]: proximal mappings for Lasso, elastic net, sparse group lasso,
//!   exclusive lasso and SLOPE.
//! - [`residual`]: the proximal residual and the relative KKT residual.
//! - [`inner`]: inexact reduced-problem solvers (APG / proximal gradient) that
//!   report the implicit error vector of each solve.
//! - [`sieve`]: the sieving outer loop that grows an index set from residual
//!   violations.
//! - [`path`]: sieving-based regularization paths, plus warm-start and strong-rule
//!   baselines.
//! - [`io`]: synthetic data, libsvm / group files, bundles and reports.

pub mod error;
pub mod inner;
pub mod io;
pub mod losses;
pub mod matrix;
pub mod model;
pub mod path;
pub mod prox;
pub mod residual;
pub mod sieve;

#[cfg(test)]
mod testutil;

pub use error::{Result, SieveError};
pub use inner::{solve_reduced, InnerBackend, InnerConfig, InnerResult, ReducedSolver, Tolerance};
pub use matrix::DenseMatrix;
pub use model::{
    embed, extract, GroupPartition, IndexSet, LossKind, Penalty, ProblemData, RegularizerSpec,
};
pub use path::{
    generate_path, lambda_grid_log10, ssr_screen_lasso, warmstart_path, LambdaGrid, PathEntry,
    PathReport, RegularizerFamily,
};
pub use residual::{residual, Criterion, ResidualReport};
pub use sieve::{
    expand_index_set, initial_index_set, sieve_solve, InitialSet, SieveConfig, SieveReport,
    Termination,
};

//! Gaussian designs with grouped Toeplitz covariance.
//!
//! `Σ_ij = 0.9^|i−j|` when `i, j` share a group and `0.3^|i−j|` otherwise, with
//! `|i−j|` taken over global column indices. Groups are contiguous blocks of `p`
//! columns.
//!
//! Randomness is ChaCha8 seeded from the 64-bit seed. Stream 0 draws `x*`; row
//! `i` uses stream `i + 1` for its `n` design entries followed by its noise
//! draw, so rows can be generated in any order or in parallel.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SieveError};
use crate::matrix::DenseMatrix;
use crate::model::{GroupPartition, LossKind, ProblemData};

/// Largest `n` for which the full covariance is factored; above it rows use
/// [`Sampler::BlockAr1`].
pub const FULL_FACTOR_MAX_DIM: usize = 5000;

const RHO_WITHIN: f64 = 0.9;
const RHO_ACROSS: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub m: usize,
    /// Number of groups.
    pub g: usize,
    /// Group size; `n = g·p`.
    pub p: usize,
    /// Fraction of nonzeros per group; `r = ⌊sparsity·p⌋`.
    pub sparsity: f64,
    pub loss: LossKind,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn n(&self) -> usize {
        self.g * self.p
    }

    /// Nonzeros per group. A relative slack of `1e-9` absorbs decimal fractions
    /// such as `0.001·5000` landing just below an integer.
    pub fn nonzeros_per_group(&self) -> usize {
        (self.sparsity * self.p as f64 * (1.0 + 1e-9)).floor() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.g == 0 || self.p == 0 {
            return Err(SieveError::InvalidInput(format!(
                "m, g and p must be at least 1 (got m={}, g={}, p={})",
                self.m, self.g, self.p
            )));
        }
        if !(self.sparsity.is_finite() && self.sparsity >= 0.0) {
            return Err(SieveError::InvalidInput(format!(
                "sparsity must be a nonnegative fraction, got {}",
                self.sparsity
            )));
        }
        let r = self.nonzeros_per_group();
        if r > self.p {
            return Err(SieveError::InvalidInput(format!(
                "sparsity {} gives r={r} nonzeros per group, more than p={}",
                self.sparsity, self.p
            )));
        }
        Ok(())
    }
}

/// How rows of the design were drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampler {
    /// Lower Cholesky factor of the full `Σ`.
    FullCholesky,
    /// `Σ` is indefinite for this `(g, p)`; rows use `V·√max(Λ, 0)` from its
    /// eigendecomposition, i.e. the nearest PSD covariance.
    FullEigenClipped,
    /// Exact AR(1) within each group, groups drawn independently. Cross-group
    /// covariance is zero instead of `0.3^|i−j|`.
    BlockAr1,
}

#[derive(Debug, Clone)]
pub struct Synthetic {
    pub problem: ProblemData,
    pub x_true: Vec<f64>,
    pub groups: GroupPartition,
    pub sampler: Sampler,
    pub spec: SyntheticSpec,
}

/// Row-major `n×n` factor `F` with `F Fᵀ = Σ` (up to clipping).
struct Factor {
    n: usize,
    lower: bool,
    data: Vec<f64>,
    sampler: Sampler,
}

fn covariance(g: usize, p: usize) -> DMatrix<f64> {
    let n = g * p;
    DMatrix::from_fn(n, n, |i, j| {
        let d = i.abs_diff(j) as i32;
        if i / p == j / p {
            RHO_WITHIN.powi(d)
        } else {
            RHO_ACROSS.powi(d)
        }
    })
}

fn build_factor(g: usize, p: usize) -> Factor {
    let n = g * p;
    let sigma = covariance(g, p);
    if let Some(chol) = sigma.clone().cholesky() {
        let l = chol.l();
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..=i {
                data[i * n + k] = l[(i, k)];
            }
        }
        return Factor {
            n,
            lower: true,
            data,
            sampler: Sampler::FullCholesky,
        };
    }
    let eig = SymmetricEigen::new(sigma);
    let mut data = vec![0.0; n * n];
    for k in 0..n {
        let s = eig.eigenvalues[k].max(0.0).sqrt();
        for i in 0..n {
            data[i * n + k] = eig.eigenvectors[(i, k)] * s;
        }
    }
    Factor {
        n,
        lower: false,
        data,
        sampler: Sampler::FullEigenClipped,
    }
}

type FactorCache = Mutex<HashMap<(usize, usize), Arc<Factor>>>;

fn cached_factor(g: usize, p: usize) -> Arc<Factor> {
    static CACHE: OnceLock<FactorCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = cache.lock().expect("factor cache poisoned").get(&(g, p)) {
        return Arc::clone(f);
    }
    // built outside the lock; a concurrent duplicate build is harmless
    let f = Arc::new(build_factor(g, p));
    cache
        .lock()
        .expect("factor cache poisoned")
        .entry((g, p))
        .or_insert(f)
        .clone()
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn sample_row(factor: Option<&Factor>, spec: &SyntheticSpec, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n = spec.n();
    let z: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    match factor {
        Some(f) => (0..f.n)
            .map(|i| {
                let row = &f.data[i * f.n..(i + 1) * f.n];
                let upto = if f.lower { i + 1 } else { f.n };
                row[..upto].iter().zip(&z[..upto]).map(|(a, b)| a * b).sum()
            })
            .collect(),
        None => {
            let innov = (1.0 - RHO_WITHIN * RHO_WITHIN).sqrt();
            let mut row = vec![0.0; n];
            for j in 0..n {
                row[j] = if j % spec.p == 0 {
                    z[j]
                } else {
                    RHO_WITHIN * row[j - 1] + innov * z[j]
                };
            }
            row
        }
    }
}

/// Draws `(A, b, x*)`: rows of `A` i.i.d. `N(0, Σ)`, `r` nonzeros per group at
/// uniform positions with values `U[0, 10]`, and `b = Ax* + ξ` (least squares)
/// or `b_i = sign((Ax* + ξ)_i)` with `sign(0) = +1` (logistic), `ξ ~ N(0, I)`.
/// Deterministic in `spec.seed` and independent of the thread count.
pub fn gen_synthetic(spec: &SyntheticSpec) -> Result<Synthetic> {
    spec.validate()?;
    let (n, p, m) = (spec.n(), spec.p, spec.m);
    let r = spec.nonzeros_per_group();

    let mut rng = stream_rng(spec.seed, 0);
    let mut x_true = vec![0.0; n];
    for l in 0..spec.g {
        let mut pos = sample(&mut rng, p, r).into_vec();
        pos.sort_unstable();
        for k in pos {
            x_true[l * p + k] = rng.random_range(0.0..=10.0);
        }
    }

    let factor = (n <= FULL_FACTOR_MAX_DIM).then(|| cached_factor(spec.g, p));
    let sampler = factor.as_ref().map_or(Sampler::BlockAr1, |f| f.sampler);
    let rows: Vec<(Vec<f64>, f64)> = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(spec.seed, i as u64 + 1);
            let row = sample_row(factor.as_deref(), spec, &mut rng);
            let noise: f64 = rng.sample(StandardNormal);
            (row, noise)
        })
        .collect();

    let mut flat = Vec::with_capacity(m * n);
    let mut b = Vec::with_capacity(m);
    for (row, noise) in &rows {
        let signal: f64 = row.iter().zip(&x_true).map(|(a, x)| a * x).sum();
        let y = signal + noise;
        b.push(match spec.loss {
            LossKind::LeastSquares => y,
            LossKind::Logistic => {
                if y >= 0.0 {
                    1.0
                } else {
                    -1.0
                }
            }
        });
        flat.extend_from_slice(row);
    }
    let a = DenseMatrix::from_row_major(m, n, &flat)?;
    Ok(Synthetic {
        problem: ProblemData::new(a, b, spec.loss)?,
        x_true,
        groups: GroupPartition::contiguous(spec.g, p)?,
        sampler,
        spec: *spec,
    })
}

//! Shared fixtures for unit tests.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matrix::DenseMatrix;
use crate::model::{GroupPartition, LossKind, ProblemData, RegularizerSpec};

/// Gaussian design; Gaussian response or random ±1 labels.
pub(crate) fn random_problem(
    rng: &mut ChaCha8Rng,
    m: usize,
    n: usize,
    loss: LossKind,
) -> ProblemData {
    let data: Vec<f64> = (0..m * n).map(|_| rng.sample(StandardNormal)).collect();
    let a = DenseMatrix::from_col_major(m, n, data).unwrap();
    let b = (0..m)
        .map(|_| match loss {
            LossKind::LeastSquares => rng.sample(StandardNormal),
            LossKind::Logistic => {
                if rng.random_bool(0.5) {
                    1.0
                } else {
                    -1.0
                }
            }
        })
        .collect();
    ProblemData::new(a, b, loss).unwrap()
}

/// One random instance of each of the five penalties at dimension `n`,
/// with groups of size at most 4.
pub(crate) fn random_specs(rng: &mut ChaCha8Rng, n: usize) -> Vec<RegularizerSpec> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut j = 0;
    while j < n {
        let size = rng.random_range(1..=4).min(n - j);
        groups.push((j..j + size).collect());
        j += size;
    }
    let partition = GroupPartition::new(groups, n).unwrap();
    let mut slope: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0)).collect();
    slope.sort_unstable_by(|a, b| b.total_cmp(a));
    slope[0] += 0.1;
    vec![
        RegularizerSpec::lasso(n, rng.random_range(0.1..2.0)).unwrap(),
        RegularizerSpec::elastic_net(n, rng.random_range(0.1..2.0), rng.random_range(0.1..2.0))
            .unwrap(),
        RegularizerSpec::sparse_group_lasso(
            rng.random_range(0.0..2.0),
            rng.random_range(0.0..2.0),
            (0..partition.len()).map(|_| rng.random_range(0.0..2.0)).collect(),
            partition.clone(),
        )
        .unwrap(),
        RegularizerSpec::exclusive_lasso(
            rng.random_range(0.1..2.0),
            (0..n).map(|_| rng.random_range(0.2..2.0)).collect(),
            partition,
        )
        .unwrap(),
        RegularizerSpec::slope(slope).unwrap(),
    ]
}


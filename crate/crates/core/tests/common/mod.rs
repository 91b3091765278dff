use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use sieve_core::{GroupPartition, RegularizerSpec};

/// Random penalty of kind `k` (index into `REG_NAMES`) on `n` coordinates,
/// groups of size at most 4.
pub fn random_spec(rng: &mut ChaCha8Rng, k: usize, n: usize) -> RegularizerSpec {
    let mut groups = Vec::new();
    let mut j = 0;
    while j < n {
        let size = rng.random_range(1..=4usize).min(n - j);
        groups.push((j..j + size).collect::<Vec<_>>());
        j += size;
    }
    // shuffle membership so groups are not always contiguous
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    let groups: Vec<Vec<usize>> = groups
        .into_iter()
        .map(|g| g.into_iter().map(|j| perm[j]).collect())
        .collect();
    let partition = GroupPartition::new(groups, n).unwrap();
    match k {
        0 => RegularizerSpec::lasso(n, rng.random_range(0.05..2.0)).unwrap(),
        1 => RegularizerSpec::elastic_net(n, rng.random_range(0.05..2.0), rng.random_range(0.05..2.0))
            .unwrap(),
        2 => {
            let weights = (0..partition.len()).map(|_| rng.random_range(0.0..2.0)).collect();
            RegularizerSpec::sparse_group_lasso(
                rng.random_range(0.0..1.5),
                rng.random_range(0.0..1.5),
                weights,
                partition,
            )
            .unwrap()
        }
        3 => RegularizerSpec::exclusive_lasso(
            rng.random_range(0.05..1.5),
            (0..n).map(|_| rng.random_range(0.2..2.0)).collect(),
            partition,
        )
        .unwrap(),
        _ => {
            let mut w: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0)).collect();
            w.sort_unstable_by(|a, b| b.total_cmp(a));
            w[0] += 0.05;
            RegularizerSpec::slope(w).unwrap()
        }
    }
}

pub fn random_vec(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| scale * rng.sample::<f64, _>(StandardNormal)).collect()
}

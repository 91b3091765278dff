use serde::{Deserialize, Serialize};

use super::index::IndexSet;
use crate::error::{check_len, Result, SieveError};

/// Disjoint partition of `[0, n)` into non-empty groups.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupPartition {
    groups: Vec<Vec<usize>>,
    dim: usize,
}

impl GroupPartition {
    pub fn new(groups: Vec<Vec<usize>>, dim: usize) -> Result<Self> {
        let mut owner: Vec<Option<usize>> = vec![None; dim];
        for (l, group) in groups.iter().enumerate() {
            if group.is_empty() {
                return Err(SieveError::InvalidInput(format!("group {l} is empty")));
            }
            for &j in group {
                if j >= dim {
                    return Err(SieveError::InvalidInput(format!(
                        "group {l} contains index {j}, out of range for dimension {dim}"
                    )));
                }
                if let Some(prev) = owner[j] {
                    return Err(SieveError::InvalidInput(format!(
                        "index {j} appears in groups {prev} and {l}"
                    )));
                }
                owner[j] = Some(l);
            }
        }
        let missing: Vec<usize> = (0..dim).filter(|&j| owner[j].is_none()).collect();
        if !missing.is_empty() {
            return Err(SieveError::InvalidInput(format!(
                "indices not covered by any group: {missing:?}"
            )));
        }
        Ok(Self { groups, dim })
    }

    /// `count` consecutive groups of `size` features each.
    pub fn contiguous(count: usize, size: usize) -> Result<Self> {
        let groups = (0..count)
            .map(|l| (l * size..(l + 1) * size).collect())
            .collect();
        Self::new(groups, count * size)
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Intersects each group with `set` and re-indexes into positions of `set`.
    /// Returns the restricted partition and, for each kept group, its original index.
    fn restrict(&self, set: &IndexSet) -> (GroupPartition, Vec<usize>) {
        let mut position = vec![usize::MAX; self.dim];
        for (k, j) in set.iter().enumerate() {
            position[j] = k;
        }
        let mut groups = Vec::new();
        let mut kept = Vec::new();
        for (l, group) in self.groups.iter().enumerate() {
            let g: Vec<usize> = group
                .iter()
                .filter(|&&j| position[j] != usize::MAX)
                .map(|&j| position[j])
                .collect();
            if !g.is_empty() {
                groups.push(g);
                kept.push(l);
            }
        }
        (
            GroupPartition {
                groups,
                dim: set.len(),
            },
            kept,
        )
    }
}

/// The regularizer `P(·)` with all of its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Penalty {
    /// `λ‖x‖₁`
    Lasso { lambda: f64 },
    /// `λ1‖x‖₁ + λ2‖x‖²`
    ElasticNet { l1: f64, l2: f64 },
    /// `λ1‖x‖₁ + λ2 Σ_l w_l ‖x_{G_l}‖`; group lasso is the case `λ1 = 0`.
    SparseGroupLasso {
        l1: f64,
        l2: f64,
        weights: Vec<f64>,
        partition: GroupPartition,
    },
    /// `λ Σ_l ‖w_{G_l} ∘ x_{G_l}‖₁²` with per-coordinate weights.
    ExclusiveLasso {
        lambda: f64,
        weights: Vec<f64>,
        partition: GroupPartition,
    },
    /// `Σ_i λ_i |x|_(i)` with a nonincreasing weight sequence.
    Slope { weights: Vec<f64> },
}

impl Penalty {
    pub fn name(&self) -> &'static str {
        match self {
            Penalty::Lasso { .. } => "lasso",
            Penalty::ElasticNet { .. } => "enet",
            Penalty::SparseGroupLasso { .. } => "sgl",
            Penalty::ExclusiveLasso { .. } => "exlasso",
            Penalty::Slope { .. } => "slope",
        }
    }
}

/// A [`Penalty`] bound to a coordinate dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularizerSpec {
    dim: usize,
    penalty: Penalty,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(SieveError::InvalidInput(format!("{name} must be positive, got {v}")))
    }
}

fn nonneg(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(SieveError::InvalidInput(format!("{name} must be nonnegative, got {v}")))
    }
}

impl RegularizerSpec {
    pub fn lasso(dim: usize, lambda: f64) -> Result<Self> {
        positive("lasso lambda", lambda)?;
        Ok(Self {
            dim,
            penalty: Penalty::Lasso { lambda },
        })
    }

    pub fn elastic_net(dim: usize, l1: f64, l2: f64) -> Result<Self> {
        positive("elastic net lambda1", l1)?;
        positive("elastic net lambda2", l2)?;
        Ok(Self {
            dim,
            penalty: Penalty::ElasticNet { l1, l2 },
        })
    }

    pub fn sparse_group_lasso(
        l1: f64,
        l2: f64,
        weights: Vec<f64>,
        partition: GroupPartition,
    ) -> Result<Self> {
        nonneg("sparse group lasso lambda1", l1)?;
        nonneg("sparse group lasso lambda2", l2)?;
        check_len("group weights", partition.len(), weights.len())?;
        for w in &weights {
            nonneg("group weight", *w)?;
        }
        Ok(Self {
            dim: partition.dim(),
            penalty: Penalty::SparseGroupLasso {
                l1,
                l2,
                weights,
                partition,
            },
        })
    }

    pub fn exclusive_lasso(lambda: f64, weights: Vec<f64>, partition: GroupPartition) -> Result<Self> {
        positive("exclusive lasso lambda", lambda)?;
        check_len("exclusive lasso weights", partition.dim(), weights.len())?;
        for w in &weights {
            positive("exclusive lasso weight", *w)?;
        }
        Ok(Self {
            dim: partition.dim(),
            penalty: Penalty::ExclusiveLasso {
                lambda,
                weights,
                partition,
            },
        })
    }

    pub fn slope(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(SieveError::InvalidInput("SLOPE needs at least one weight".into()));
        }
        positive("SLOPE lambda_1", weights[0])?;
        for w in &weights {
            nonneg("SLOPE weight", *w)?;
        }
        if let Some(i) = weights.windows(2).position(|w| w[1] > w[0]) {
            return Err(SieveError::InvalidInput(format!(
                "SLOPE weights must be nonincreasing (entry {} > entry {i})",
                i + 1
            )));
        }
        Ok(Self {
            dim: weights.len(),
            penalty: Penalty::Slope { weights },
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn penalty(&self) -> &Penalty {
        &self.penalty
    }

    /// The regularizer `z ↦ P(M_I z)` written natively in `|I|` coordinates,
    /// where `M_I` scatters `z` into positions `I` and zeros elsewhere.
    pub fn restrict(&self, set: &IndexSet) -> Result<RegularizerSpec> {
        if set.min_dim() > self.dim {
            return Err(SieveError::InvalidInput(format!(
                "index {} out of range for regularizer dimension {}",
                set.min_dim() - 1,
                self.dim
            )));
        }
        let dim = set.len();
        let penalty = match &self.penalty {
            Penalty::Lasso { .. } | Penalty::ElasticNet { .. } => self.penalty.clone(),
            Penalty::SparseGroupLasso {
                l1,
                l2,
                weights,
                partition,
            } => {
                let (partition, kept) = partition.restrict(set);
                Penalty::SparseGroupLasso {
                    l1: *l1,
                    l2: *l2,
                    weights: kept.iter().map(|&l| weights[l]).collect(),
                    partition,
                }
            }
            Penalty::ExclusiveLasso {
                lambda,
                weights,
                partition,
            } => Penalty::ExclusiveLasso {
                lambda: *lambda,
                weights: set.iter().map(|j| weights[j]).collect(),
                partition: partition.restrict(set).0,
            },
            // embedded zeros sort last and meet the smallest weights
            Penalty::Slope { weights } => Penalty::Slope {
                weights: weights[..dim].to_vec(),
            },
        };
        Ok(RegularizerSpec { dim, penalty })
    }

    /// `P(x)`.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        check_len("regularizer argument", self.dim, x.len())?;
        Ok(match &self.penalty {
            Penalty::Lasso { lambda } => lambda * l1_norm(x),
            Penalty::ElasticNet { l1, l2 } => {
                l1 * l1_norm(x) + l2 * x.iter().map(|v| v * v).sum::<f64>()
            }
            Penalty::SparseGroupLasso {
                l1,
                l2,
                weights,
                partition,
            } => {
                let group_term: f64 = partition
                    .groups()
                    .iter()
                    .zip(weights)
                    .map(|(g, w)| w * g.iter().map(|&j| x[j] * x[j]).sum::<f64>().sqrt())
                    .sum();
                l1 * l1_norm(x) + l2 * group_term
            }
            Penalty::ExclusiveLasso {
                lambda,
                weights,
                partition,
            } => {
                let total: f64 = partition
                    .groups()
                    .iter()
                    .map(|g| {
                        let s: f64 = g.iter().map(|&j| weights[j] * x[j].abs()).sum();
                        s * s
                    })
                    .sum();
                lambda * total
            }
            Penalty::Slope { weights } => {
                let mut mags: Vec<f64> = x.iter().map(|v| v.abs()).collect();
                mags.sort_unstable_by(|a, b| b.total_cmp(a));
                mags.iter().zip(weights).map(|(a, w)| a * w).sum()
            }
        })
    }

    /// The same penalty with every parameter multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<RegularizerSpec> {
        positive("scale factor", factor)?;
        let penalty = match &self.penalty {
            Penalty::Lasso { lambda } => Penalty::Lasso {
                lambda: lambda * factor,
            },
            Penalty::ElasticNet { l1, l2 } => Penalty::ElasticNet {
                l1: l1 * factor,
                l2: l2 * factor,
            },
            Penalty::SparseGroupLasso {
                l1,
                l2,
                weights,
                partition,
            } => Penalty::SparseGroupLasso {
                l1: l1 * factor,
                l2: l2 * factor,
                weights: weights.clone(),
                partition: partition.clone(),
            },
            Penalty::ExclusiveLasso {
                lambda,
                weights,
                partition,
            } => Penalty::ExclusiveLasso {
                lambda: lambda * factor,
                weights: weights.clone(),
                partition: partition.clone(),
            },
            Penalty::Slope { weights } => Penalty::Slope {
                weights: weights.iter().map(|w| w * factor).collect(),
            },
        };
        Ok(RegularizerSpec {
            dim: self.dim,
            penalty,
        })
    }
}

fn l1_norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v.abs()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::embed;
    use crate::testutil::random_specs;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn evaluate_examples() {
        let lasso = RegularizerSpec::lasso(2, 2.0).unwrap();
        assert_eq!(lasso.evaluate(&[1.0, -3.0]).unwrap(), 8.0);
        let slope = RegularizerSpec::slope(vec![2.0, 1.0]).unwrap();
        assert_eq!(slope.evaluate(&[1.0, -3.0]).unwrap(), 7.0);
        let ex = RegularizerSpec::exclusive_lasso(
            1.0,
            vec![1.0, 1.0],
            GroupPartition::contiguous(1, 2).unwrap(),
        )
        .unwrap();
        assert_eq!(ex.evaluate(&[1.0, -2.0]).unwrap(), 9.0);
        assert!(lasso.evaluate(&[1.0]).is_err());
    }

    #[test]
    fn restrict_examples() {
        let lasso = RegularizerSpec::lasso(5, 1.0).unwrap();
        let r = lasso.restrict(&IndexSet::new(vec![0, 2], 5).unwrap()).unwrap();
        assert_eq!(r, RegularizerSpec::lasso(2, 1.0).unwrap());

        let slope = RegularizerSpec::slope(vec![3.0, 2.0, 1.0]).unwrap();
        let r = slope.restrict(&IndexSet::new(vec![1], 3).unwrap()).unwrap();
        assert_eq!(r, RegularizerSpec::slope(vec![3.0]).unwrap());

        let ex = RegularizerSpec::exclusive_lasso(
            1.0,
            vec![1.0, 2.0, 3.0, 4.0],
            GroupPartition::contiguous(2, 2).unwrap(),
        )
        .unwrap();
        let r = ex.restrict(&IndexSet::new(vec![1, 2], 4).unwrap()).unwrap();
        match r.penalty() {
            Penalty::ExclusiveLasso {
                weights, partition, ..
            } => {
                assert_eq!(weights, &vec![2.0, 3.0]);
                assert_eq!(partition.groups(), &[vec![0], vec![1]]);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(lasso.restrict(&IndexSet::new(vec![7], 8).unwrap()).is_err());
    }

    #[test]
    fn partition_rejects_overlap_and_gaps() {
        let e = GroupPartition::new(vec![vec![0, 1], vec![1, 2]], 3).unwrap_err();
        assert!(e.to_string().contains("index 1"));
        assert!(GroupPartition::new(vec![vec![0], vec![2]], 3).is_err());
        assert!(GroupPartition::new(vec![vec![0, 1], vec![]], 2).is_err());
        assert!(GroupPartition::new(vec![vec![0, 3]], 2).is_err());
        assert!(GroupPartition::new(vec![vec![1], vec![0]], 2).is_ok());
    }

    #[test]
    fn partition_fuzz() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let n = rng.random_range(1..10);
            let groups: Vec<Vec<usize>> = (0..rng.random_range(1..5))
                .map(|_| (0..rng.random_range(0..4)).map(|_| rng.random_range(0..n + 1)).collect())
                .collect();
            let mut seen = vec![0usize; n + 1];
            for g in &groups {
                for &j in g {
                    seen[j] += 1;
                }
            }
            let valid = groups.iter().all(|g| !g.is_empty())
                && seen[..n].iter().all(|&c| c == 1)
                && seen[n] == 0;
            assert_eq!(GroupPartition::new(groups, n).is_ok(), valid);
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(RegularizerSpec::lasso(3, 0.0).is_err());
        assert!(RegularizerSpec::elastic_net(3, 1.0, -1.0).is_err());
        assert!(RegularizerSpec::slope(vec![1.0, 2.0]).is_err());
        assert!(RegularizerSpec::slope(vec![0.0, 0.0]).is_err());
        let p = GroupPartition::contiguous(2, 2).unwrap();
        assert!(RegularizerSpec::exclusive_lasso(1.0, vec![1.0, 0.0, 1.0, 1.0], p.clone()).is_err());
        assert!(RegularizerSpec::sparse_group_lasso(0.0, 1.0, vec![1.0], p.clone()).is_err());
        assert!(RegularizerSpec::sparse_group_lasso(0.0, 1.0, vec![1.0, 0.0], p).is_ok());
    }

    #[test]
    fn restrict_then_evaluate_equals_embed_then_evaluate() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let n = rng.random_range(1..=12);
            for spec in random_specs(&mut rng, n) {
                let idx: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
                let set = IndexSet::new(idx, n).unwrap();
                let z: Vec<f64> = (0..set.len()).map(|_| rng.random_range(-3.0..3.0)).collect();
                let restricted = spec.restrict(&set).unwrap();
                let lhs = restricted.evaluate(&z).unwrap();
                let rhs = spec.evaluate(&embed(&z, &set, n).unwrap()).unwrap();
                assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()), "{spec:?}");
            }
        }
    }

    #[test]
    fn restrict_to_full_set_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in 1..=12 {
            for spec in random_specs(&mut rng, n) {
                assert_eq!(spec.restrict(&IndexSet::full(n)).unwrap(), spec);
            }
        }
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Result, SieveError};

/// Sorted, duplicate-free feature indices in `[0, n)`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexSet {
    indices: Vec<usize>,
}

impl IndexSet {
    /// Validates that `indices` is strictly increasing and bounded by `n`.
    pub fn new(indices: Vec<usize>, n: usize) -> Result<Self> {
        if let Some(w) = indices.windows(2).find(|w| w[0] >= w[1]) {
            return Err(SieveError::InvalidInput(format!(
                "index set not strictly increasing at {} -> {}",
                w[0], w[1]
            )));
        }
        if let Some(&last) = indices.last() {
            if last >= n {
                return Err(SieveError::InvalidInput(format!(
                    "index {last} out of range for dimension {n}"
                )));
            }
        }
        Ok(Self { indices })
    }

    /// Sorts and deduplicates arbitrary indices.
    pub fn from_unsorted(mut indices: Vec<usize>, n: usize) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        Self::new(indices, n)
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn full(n: usize) -> Self {
        Self {
            indices: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.indices
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.indices.binary_search(&j).is_ok()
    }

    /// Largest index + 1, i.e. the smallest dimension this set is valid for.
    pub fn min_dim(&self) -> usize {
        self.indices.last().map_or(0, |l| l + 1)
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        let (a, b) = (&self.indices, &other.indices);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        IndexSet { indices: out }
    }

    /// Indices of `[0, n)` not in the set.
    pub fn complement(&self, n: usize) -> IndexSet {
        let mut out = Vec::with_capacity(n.saturating_sub(self.len()));
        let mut it = self.indices.iter().peekable();
        for j in 0..n {
            if it.peek() == Some(&&j) {
                it.next();
            } else {
                out.push(j);
            }
        }
        IndexSet { indices: out }
    }

    /// Indices `j` with `|x_j| > threshold`.
    pub fn support(x: &[f64], threshold: f64) -> IndexSet {
        IndexSet {
            indices: x
                .iter()
                .enumerate()
                .filter(|(_, v)| v.abs() > threshold)
                .map(|(j, _)| j)
                .collect(),
        }
    }
}

/// `x_I`: the entries of `x` at positions `I`.
pub fn extract(x: &[f64], set: &IndexSet) -> Result<Vec<f64>> {
    if set.min_dim() > x.len() {
        return Err(SieveError::InvalidInput(format!(
            "index {} out of range for vector of length {}",
            set.min_dim() - 1,
            x.len()
        )));
    }
    Ok(set.iter().map(|j| x[j]).collect())
}

/// Scatters `z` into positions `I` of a zero vector of length `n`.
pub fn embed(z: &[f64], set: &IndexSet, n: usize) -> Result<Vec<f64>> {
    check_len("embed", set.len(), z.len())?;
    if set.min_dim() > n {
        return Err(SieveError::InvalidInput(format!(
            "index {} out of range for dimension {n}",
            set.min_dim() - 1
        )));
    }
    let mut out = vec![0.0; n];
    for (j, v) in set.iter().zip(z) {
        out[j] = *v;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn validation() {
        assert!(IndexSet::new(vec![0, 2, 4], 5).is_ok());
        assert!(IndexSet::new(vec![0, 2, 2], 5).is_err());
        assert!(IndexSet::new(vec![3, 1], 5).is_err());
        assert!(IndexSet::new(vec![5], 5).is_err());
        assert_eq!(
            IndexSet::from_unsorted(vec![3, 1, 3], 5).unwrap().as_slice(),
            &[1, 3]
        );
    }

    #[test]
    fn embed_examples() {
        let i = IndexSet::new(vec![2], 4).unwrap();
        assert_eq!(embed(&[5.0], &i, 4).unwrap(), vec![0.0, 0.0, 5.0, 0.0]);
        assert_eq!(embed(&[], &IndexSet::empty(), 3).unwrap(), vec![0.0; 3]);
        assert!(embed(&[1.0, 2.0], &i, 4).is_err());
        assert!(embed(&[1.0], &i, 2).is_err());
    }

    #[test]
    fn set_algebra() {
        let a = IndexSet::new(vec![0, 3, 5], 8).unwrap();
        let b = IndexSet::new(vec![1, 3, 7], 8).unwrap();
        assert_eq!(a.union(&b).as_slice(), &[0, 1, 3, 5, 7]);
        assert_eq!(a.complement(6).as_slice(), &[1, 2, 4]);
        assert!(a.contains(5) && !a.contains(4));
        assert_eq!(IndexSet::support(&[0.0, 1e-12, -2.0], 1e-10).as_slice(), &[2]);
    }

    proptest! {
        #[test]
        fn embed_extract_round_trip(
            x in proptest::collection::vec(-5.0f64..5.0, 1..20),
            mask in proptest::collection::vec(any::<bool>(), 20),
        ) {
            let n = x.len();
            let idx: Vec<usize> = (0..n).filter(|&j| mask[j]).collect();
            let set = IndexSet::new(idx, n).unwrap();
            let sparse: Vec<f64> = (0..n).map(|j| if set.contains(j) { x[j] } else { 0.0 }).collect();
            let back = embed(&extract(&sparse, &set).unwrap(), &set, n).unwrap();
            prop_assert_eq!(back, sparse);
            let u = set.union(&set.complement(n));
            prop_assert_eq!(u, IndexSet::full(n));
        }
    }
}

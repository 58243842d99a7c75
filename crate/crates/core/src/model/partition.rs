use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cluster labels canonicalised to first-appearance order (0, 1, …, K-1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    labels: Vec<usize>,
}

impl Partition {
    pub fn from_labels(raw: &[usize]) -> Self {
        let mut map = std::collections::HashMap::new();
        let labels = raw
            .iter()
            .map(|l| {
                let next = map.len();
                *map.entry(*l).or_insert(next)
            })
            .collect();
        Self { labels }
    }

    /// Wraps labels that are already canonical.
    pub fn from_canonical(labels: Vec<usize>) -> Result<Self> {
        let mut next = 0;
        for &l in &labels {
            if l > next {
                return Err(Error::Data(format!("labels not in first-appearance order: {labels:?}")));
            }
            if l == next {
                next += 1;
            }
        }
        Ok(Self { labels })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_clusters(&self) -> usize {
        self.labels.iter().max().map_or(0, |m| m + 1)
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.n_clusters()];
        for &l in &self.labels {
            s[l] += 1;
        }
        s
    }

    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut m = vec![Vec::new(); self.n_clusters()];
        for (i, &l) in self.labels.iter().enumerate() {
            m[l].push(i);
        }
        m
    }
}

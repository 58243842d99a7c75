use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::{Baseline, Partition};

/// Cluster parameters kept in a retained draw.
#[derive(Clone, Debug, PartialEq)]
pub struct DrawnCluster {
    pub mu: f64,
    pub beta: DVector<f64>,
    pub m: DVector<f64>,
    pub tau: DVector<f64>,
}

/// One retained MCMC iteration: occupied clusters in canonical label order.
#[derive(Clone, Debug, PartialEq)]
pub struct PosteriorDraw {
    pub partition: Partition,
    pub clusters: Vec<DrawnCluster>,
    pub sigma2: f64,
    pub alpha: f64,
}

impl PosteriorDraw {
    pub fn cluster_of(&self, i: usize) -> &DrawnCluster {
        &self.clusters[self.partition.labels()[i]]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DrawsMeta {
    pub iterations: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub seed: u64,
    pub baseline: Baseline,
    /// Allocation was pinned to one cluster (plain shrinkage regression).
    pub single_cluster: bool,
    pub ng_v: Option<f64>,
    pub n: usize,
    pub p: usize,
    pub has_covariate_params: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iter: usize,
    pub sigma2: f64,
    pub alpha: f64,
    pub k: usize,
    pub loglik: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PosteriorDraws {
    pub draws: Vec<PosteriorDraw>,
    pub meta: DrawsMeta,
    pub trace: Vec<TraceRow>,
}

impl PosteriorDraws {
    pub fn len(&self) -> usize {
        self.draws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }

    pub fn partitions(&self) -> Vec<Partition> {
        self.draws.iter().map(|d| d.partition.clone()).collect()
    }
}

use nalgebra::{DMatrix, DVector};

use super::ClusterParams;
use crate::error::{Error, Result};

/// Shared (η, Σ⁻¹) of the plain-normal baseline.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalGlobal {
    pub eta: DVector<f64>,
    pub precision: DMatrix<f64>,
}

/// Full MCMC state of one chain. Labels are 0-based indices into `clusters`.
#[derive(Clone, Debug, PartialEq)]
pub struct MixtureState {
    pub clusters: Vec<ClusterParams>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    pub u: Vec<f64>,
    pub labels: Vec<usize>,
    pub sigma2: f64,
    pub alpha: f64,
    pub ng_v: Option<f64>,
    pub global: Option<NormalGlobal>,
}

impl MixtureState {
    /// One past the largest occupied label (M).
    pub fn max_label(&self) -> usize {
        self.labels.iter().max().map_or(0, |m| m + 1)
    }

    /// Current truncation level (N).
    pub fn truncation(&self) -> usize {
        self.clusters.len()
    }

    pub fn counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.clusters.len().max(self.max_label())];
        for &d in &self.labels {
            c[d] += 1;
        }
        c
    }

    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut m = vec![Vec::new(); self.clusters.len().max(self.max_label())];
        for (i, &d) in self.labels.iter().enumerate() {
            m[d].push(i);
        }
        m
    }

    /// Number of distinct occupied clusters (K).
    pub fn n_occupied(&self) -> usize {
        self.counts().iter().filter(|c| **c > 0).count()
    }

    /// ∏ⱼ (1 − vⱼ) = 1 − Σⱼ wⱼ, computed without cancellation.
    pub fn remaining_stick(&self) -> f64 {
        self.v.iter().map(|v| 1.0 - v).product()
    }

    pub fn check_invariants(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Numerical(msg));
        if !(self.sigma2 > 0.0 && self.sigma2.is_finite()) {
            return fail(format!("sigma2 = {}", self.sigma2));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return fail(format!("alpha = {}", self.alpha));
        }
        let n_clusters = self.clusters.len();
        if self.v.len() != n_clusters || self.w.len() != n_clusters {
            return fail(format!(
                "{} clusters but {} sticks and {} weights",
                n_clusters,
                self.v.len(),
                self.w.len()
            ));
        }
        if let Some(i) = self.labels.iter().position(|d| *d >= n_clusters) {
            return fail(format!("label {} of row {} beyond truncation {}", self.labels[i], i, n_clusters));
        }
        for (i, (&u, &d)) in self.u.iter().zip(&self.labels).enumerate() {
            if !(u > 0.0 && u < self.w[d]) {
                return fail(format!("slice variable u[{i}] = {u} outside (0, w = {})", self.w[d]));
            }
        }
        if let Some(j) = self.clusters.iter().position(|c| !c.is_valid()) {
            return fail(format!("cluster {j} has invalid parameters"));
        }
        Ok(())
    }
}

use nalgebra::DMatrix;

use super::Prepared;
use crate::error::{Error, Result};
use crate::model::MixtureState;
use crate::dist::RngStream;
use crate::par;

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Log of N(yᵢ | μⱼ + xᵢᵀβⱼ, σ²) · N_p(xᵢ | mⱼ, diag τⱼ) for every row i and
/// every cluster j in the truncation, as an n × N matrix.
pub fn allocation_log_kernel(state: &MixtureState, prep: &Prepared) -> DMatrix<f64> {
    let n_clusters = state.clusters.len();
    let dim = prep.design.ncols();
    let p = dim - 1;
    let coefs = DMatrix::from_fn(dim, n_clusters, |k, j| {
        let c = &state.clusters[j];
        if k == 0 { c.mu } else { c.beta[k - 1] }
    });
    let inv_tau = DMatrix::from_fn(p, n_clusters, |l, j| 1.0 / state.clusters[j].tau[l]);
    let m_over_tau = DMatrix::from_fn(p, n_clusters, |l, j| state.clusters[j].m[l] * inv_tau[(l, j)]);
    let consts: Vec<f64> = state
        .clusters
        .iter()
        .map(|c| {
            let q: f64 = c.m.iter().zip(c.tau.iter()).map(|(m, t)| m * m / t + t.ln()).sum();
            -0.5 * (q + p as f64 * LN_2PI)
        })
        .collect();
    let lp = &prep.design * coefs;
    let quad = &prep.x_sq * inv_tau;
    let cross = &prep.data.x * m_over_tau;
    let y = &prep.data.y;
    let s2 = state.sigma2;
    let ln_norm = -0.5 * (LN_2PI + s2.ln());
    DMatrix::from_fn(y.len(), n_clusters, |i, j| {
        let r = y[i] - lp[(i, j)];
        ln_norm - 0.5 * r * r / s2 + consts[j] - 0.5 * quad[(i, j)] + cross[(i, j)]
    })
}

/// Draws every label from its slice-restricted conditional.
pub fn update_allocations(state: &mut MixtureState, prep: &Prepared, rng: &mut RngStream) -> Result<()> {
    let kernel = allocation_log_kernel(state, prep);
    let base = rng.fork();
    let (w, u) = (&state.w, &state.u);
    let labels = par::try_map_range(state.labels.len(), |i| {
        let cand: Vec<usize> = (0..w.len()).filter(|&j| w[j] > u[i]).collect();
        if cand.is_empty() {
            return Err(Error::Numerical(format!("row {i} has no cluster with weight above u = {}", u[i])));
        }
        let logs: Vec<f64> = cand.iter().map(|&j| kernel[(i, j)]).collect();
        let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !top.is_finite() {
            return Err(Error::Numerical(format!("row {i}: allocation log kernel is {top}")));
        }
        let probs: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
        let total: f64 = probs.iter().sum();
        let mut r = base.substream(i as u64).uniform() * total;
        for (k, pr) in probs.iter().enumerate() {
            r -= pr;
            if r <= 0.0 {
                return Ok(cand[k]);
            }
        }
        Ok(*cand.last().unwrap())
    })?;
    state.labels = labels;
    Ok(())
}

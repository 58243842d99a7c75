use log::debug;
use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::allocation::update_allocations;
use super::covariates::update_covariate_params;
use super::horseshoe::{hs_update_coefficients, hs_update_locals};
use super::normal_full::{normalfull_update_cluster, normalfull_update_global};
use super::normal_gamma::{ng_update_coefficients, ng_update_locals};
use super::prior::draw_prior_cluster;
use super::scalars::{update_alpha, update_sigma2};
use super::weights::update_weights_and_slices;
use super::Prepared;
use crate::dist::{ln_normal_pdf, RngStream};
use crate::error::{Error, Result};
use crate::model::{
    init_state, Baseline, ClusterParams, Dataset, DrawnCluster, DrawsMeta, Hyperparams, MixtureState,
    NormalGlobal, Partition, PosteriorDraw, PosteriorDraws, TraceRow,
};
use crate::par;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ChainConfig {
    /// Total sweeps including burn-in.
    pub iterations: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub seed: u64,
    /// Keep (m, τ) in the retained draws; prediction needs them.
    pub store_covariate_params: bool,
    /// Pin every row to one cluster: plain shrinkage linear regression.
    pub single_cluster: bool,
}

impl Default for ChainConfig {
    fn default() -> Self {
        Self {
            iterations: 5000,
            burn_in: 2000,
            thin: 1,
            seed: 1,
            store_covariate_params: true,
            single_cluster: false,
        }
    }
}

impl ChainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.thin == 0 {
            return Err(Error::InvalidParameter("thin must be at least 1".into()));
        }
        if self.iterations <= self.burn_in {
            return Err(Error::InvalidParameter(format!(
                "iterations ({}) must exceed burn-in ({})",
                self.iterations, self.burn_in
            )));
        }
        Ok(())
    }

    pub fn retained(&self) -> usize {
        (self.iterations - self.burn_in).div_ceil(self.thin)
    }
}

/// Updates one cluster from its members: locals, then (μ, β), then (m, τ).
/// Empty clusters are redrawn from G₀.
#[allow(clippy::too_many_arguments)]
pub fn update_cluster(
    cluster: &mut ClusterParams,
    members: &[usize],
    prep: &Prepared,
    hyper: &Hyperparams,
    sigma2: f64,
    ng_v: Option<f64>,
    global: Option<&NormalGlobal>,
    rng: &mut RngStream,
) -> Result<()> {
    let p = prep.data.p();
    if members.is_empty() {
        *cluster = draw_prior_cluster(hyper, p, sigma2, ng_v, global, rng)?;
        return Ok(());
    }
    let x = prep.member_design(members);
    let y = prep.member_y(members);
    match hyper.baseline {
        Baseline::Horseshoe => {
            hs_update_locals(cluster, sigma2, rng)?;
            hs_update_coefficients(cluster, &x, &y, sigma2, hyper.nu_mu, rng)?;
        }
        Baseline::NormalGamma => {
            let v = ng_v.ok_or_else(|| Error::InvalidParameter("normal-gamma state without V".into()))?;
            ng_update_locals(cluster, v, rng)?;
            ng_update_coefficients(cluster, &x, &y, sigma2, hyper.nu_mu, rng)?;
        }
        Baseline::NormalFull => {
            let g = global.ok_or_else(|| Error::InvalidParameter("plain-normal state without (eta, Sigma)".into()))?;
            normalfull_update_cluster(cluster, &x, &y, sigma2, g, rng)?;
        }
    }
    update_covariate_params(cluster, &prep.member_x(members), hyper, rng)
}

/// Step 2 for every cluster below the largest label, followed by the
/// plain-normal hyperparameters.
pub fn update_clusters(state: &mut MixtureState, prep: &Prepared, hyper: &Hyperparams, rng: &mut RngStream) -> Result<()> {
    let m = state.max_label();
    let members = state.members();
    let base = rng.fork();
    let (sigma2, ng_v) = (state.sigma2, state.ng_v);
    let global = state.global.clone();
    par::try_for_each_mut(&mut state.clusters[..m], |j, c| {
        let mut r = base.substream(j as u64);
        update_cluster(c, &members[j], prep, hyper, sigma2, ng_v, global.as_ref(), &mut r)
    })?;
    if let Some(g) = state.global.as_mut() {
        let coefs: Vec<DVector<f64>> = (0..m)
            .filter(|&j| !members[j].is_empty())
            .map(|j| state.clusters[j].coefficients())
            .collect();
        normalfull_update_global(g, &coefs, hyper, rng)?;
    }
    Ok(())
}

/// Σᵢ log N(yᵢ | ·, σ²) + log N_p(xᵢ | m, τ) under the current labels.
pub fn log_likelihood(state: &MixtureState, prep: &Prepared) -> f64 {
    let data = prep.data;
    let p = data.p();
    state
        .labels
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let c = &state.clusters[d];
            let mut fit = c.mu;
            let mut lx = 0.0;
            for l in 0..p {
                let x = data.x[(i, l)];
                fit += x * c.beta[l];
                lx += ln_normal_pdf(x, c.m[l], c.tau[l]);
            }
            ln_normal_pdf(data.y[i], fit, state.sigma2) + lx
        })
        .sum()
}

fn snapshot(state: &MixtureState, keep_covariates: bool) -> PosteriorDraw {
    let partition = Partition::from_labels(&state.labels);
    let mut order = Vec::new();
    let mut seen = vec![false; state.clusters.len()];
    for &d in &state.labels {
        if !seen[d] {
            seen[d] = true;
            order.push(d);
        }
    }
    let clusters = order
        .iter()
        .map(|&j| {
            let c = &state.clusters[j];
            DrawnCluster {
                mu: c.mu,
                beta: c.beta.clone(),
                m: if keep_covariates { c.m.clone() } else { DVector::zeros(0) },
                tau: if keep_covariates { c.tau.clone() } else { DVector::zeros(0) },
            }
        })
        .collect();
    PosteriorDraw { partition, clusters, sigma2: state.sigma2, alpha: state.alpha }
}

fn pin_to_single_cluster(state: &mut MixtureState) {
    state.labels.iter_mut().for_each(|d| *d = 0);
    state.clusters.truncate(1);
    state.v = vec![1.0];
    state.w = vec![1.0];
    state.u = vec![0.5; state.labels.len()];
}

/// One full sweep in the order weights → clusters → labels → σ² → α.
pub fn sweep(state: &mut MixtureState, prep: &Prepared, hyper: &Hyperparams, single_cluster: bool, rng: &mut RngStream) -> Result<()> {
    if !single_cluster {
        update_weights_and_slices(state, hyper, rng)?;
    }
    update_clusters(state, prep, hyper, rng)?;
    if !single_cluster {
        update_allocations(state, prep, rng)?;
    }
    update_sigma2(state, prep, hyper, rng)?;
    if !single_cluster {
        update_alpha(state, hyper, prep.data.n(), rng)?;
    }
    Ok(())
}

/// Runs one chain and keeps every `thin`-th post-burn-in state.
pub fn run_chain(data: &Dataset, hyper: &Hyperparams, cfg: &ChainConfig) -> Result<PosteriorDraws> {
    cfg.validate()?;
    hyper.validate()?;
    let prep = Prepared::new(data);
    let master = RngStream::new(cfg.seed);
    let mut state = init_state(data, hyper, &mut master.substream(u64::MAX))?;
    if cfg.single_cluster {
        pin_to_single_cluster(&mut state);
    }
    let mut draws = Vec::with_capacity(cfg.retained());
    let mut trace = Vec::with_capacity(cfg.iterations);
    for s in 0..cfg.iterations {
        let mut rng = master.substream(s as u64);
        sweep(&mut state, &prep, hyper, cfg.single_cluster, &mut rng)?;
        let loglik = log_likelihood(&state, &prep);
        let k = state.n_occupied();
        if !loglik.is_finite() {
            return Err(Error::Numerical(format!(
                "log-likelihood {loglik} at sweep {s}: sigma2 = {}, alpha = {}, K = {k}, truncation = {}, labels = {:?}",
                state.sigma2,
                state.alpha,
                state.truncation(),
                state.labels
            )));
        }
        trace.push(TraceRow { iter: s, sigma2: state.sigma2, alpha: state.alpha, k, loglik });
        if s >= cfg.burn_in && (s - cfg.burn_in).is_multiple_of(cfg.thin) {
            draws.push(snapshot(&state, cfg.store_covariate_params));
        }
        if s % 500 == 0 {
            debug!("sweep {s}: K = {k}, sigma2 = {:.4}, alpha = {:.4}", state.sigma2, state.alpha);
        }
    }
    Ok(PosteriorDraws {
        draws,
        meta: DrawsMeta {
            iterations: cfg.iterations,
            burn_in: cfg.burn_in,
            thin: cfg.thin,
            seed: cfg.seed,
            baseline: hyper.baseline,
            single_cluster: cfg.single_cluster,
            ng_v: state.ng_v,
            n: data.n(),
            p: data.p(),
            has_covariate_params: cfg.store_covariate_params,
        },
        trace,
    })
}

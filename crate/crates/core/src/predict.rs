//! Posterior predictive mean and density at new covariate values.
//!
//! For each retained draw the new subject joins cluster j with weight
//! nⱼ·∏ₗ N(xₗ | mⱼₗ, τⱼₗ) or a fresh cluster with weight α·f₀(x), where f₀ is
//! the prior marginal of x. Draws are then averaged.

use nalgebra::{DMatrix, DVector};

use crate::dist::{ln_normal_pdf, log_student_t_pdf, log_sum_exp, RngStream};
use crate::error::{check_same_len, Error, Result};
use crate::model::{draw_prior_global, Baseline, Hyperparams, PosteriorDraw, PosteriorDraws};
use crate::par;
use crate::sampler::prior::{draw_prior_coefficients, draw_prior_locals};

pub const DEFAULT_MC_G0_DRAWS: usize = 256;

/// log f₀(x): independent Student-t marginals with ν₀ degrees of freedom,
/// location m₀ and squared scale s₀²(1 + n₀)/n₀.
pub fn marginal_x_prior_logpdf(x: &[f64], hyper: &Hyperparams) -> f64 {
    let scale = (hyper.s0_sq * (1.0 + hyper.n0) / hyper.n0).sqrt();
    x.iter().map(|&v| log_student_t_pdf(v, hyper.nu0, hyper.m0, scale)).sum()
}

/// Log masses of the urn for one draw; `ln_b` normalises them.
#[derive(Clone, Debug, PartialEq)]
pub struct UrnWeights {
    pub ln_new_cluster: f64,
    pub ln_clusters: Vec<f64>,
    pub ln_b: f64,
}

impl UrnWeights {
    pub fn new_cluster_prob(&self) -> f64 {
        (self.ln_new_cluster - self.ln_b).exp()
    }

    pub fn cluster_probs(&self) -> Vec<f64> {
        self.ln_clusters.iter().map(|l| (l - self.ln_b).exp()).collect()
    }
}

fn ln_cluster_x_density(x: &[f64], m: &DVector<f64>, tau: &DVector<f64>) -> f64 {
    x.iter().enumerate().map(|(l, &v)| ln_normal_pdf(v, m[l], tau[l])).sum()
}

/// Urn weights for covariates `x` under one draw with DP mass `alpha`
/// (zero turns the new-cluster term off).
pub fn urn_allocation_logprobs(x: &[f64], draw: &PosteriorDraw, alpha: f64, hyper: &Hyperparams) -> Result<UrnWeights> {
    let sizes = draw.partition.sizes();
    let ln_new_cluster = if alpha > 0.0 {
        alpha.ln() + marginal_x_prior_logpdf(x, hyper)
    } else {
        f64::NEG_INFINITY
    };
    let mut ln_clusters = Vec::with_capacity(sizes.len());
    for (j, c) in draw.clusters.iter().enumerate() {
        let lx = if draw.clusters.len() == 1 && alpha == 0.0 {
            0.0
        } else {
            if c.m.len() != x.len() {
                return Err(Error::Data("draws lack covariate parameters needed for prediction".into()));
            }
            ln_cluster_x_density(x, &c.m, &c.tau)
        };
        ln_clusters.push((sizes[j] as f64).ln() + lx);
    }
    let mut all = ln_clusters.clone();
    all.push(ln_new_cluster);
    let ln_b = log_sum_exp(&all);
    Ok(UrnWeights { ln_new_cluster, ln_clusters, ln_b })
}

fn effective_alpha(draws: &PosteriorDraws, d: &PosteriorDraw) -> f64 {
    if draws.meta.single_cluster {
        0.0
    } else {
        d.alpha
    }
}

fn check_x(draws: &PosteriorDraws, x: &[f64]) -> Result<()> {
    if draws.is_empty() {
        return Err(Error::Data("no posterior draws".into()));
    }
    check_same_len(draws.meta.p, x.len())
}

/// Per-draw conditional mean, averaged over draws. The new-cluster term
/// contributes nothing to the numerator because μ and β have prior mean
/// zero, but its mass stays in the normaliser.
pub fn predictive_expectation(x: &[f64], draws: &PosteriorDraws, hyper: &Hyperparams) -> Result<f64> {
    check_x(draws, x)?;
    let mut total = 0.0;
    for d in &draws.draws {
        let w = urn_allocation_logprobs(x, d, effective_alpha(draws, d), hyper)?;
        for (c, lw) in d.clusters.iter().zip(&w.ln_clusters) {
            let fit = c.mu + c.beta.iter().zip(x).map(|(b, v)| b * v).sum::<f64>();
            total += (lw - w.ln_b).exp() * fit;
        }
    }
    Ok(total / draws.len() as f64)
}

/// `predictive_expectation` for every row of `x`.
pub fn predict_rows(x: &DMatrix<f64>, draws: &PosteriorDraws, hyper: &Hyperparams) -> Result<DVector<f64>> {
    let rows: Vec<Vec<f64>> = (0..x.nrows()).map(|i| x.row(i).iter().copied().collect()).collect();
    let out = par::try_map_range(rows.len(), |i| predictive_expectation(&rows[i], draws, hyper))?;
    Ok(DVector::from_vec(out))
}

struct DrawMixture {
    new_prob: f64,
    probs: Vec<f64>,
    means: Vec<f64>,
    sigma2: f64,
    g0_means: Vec<f64>,
}

/// Predictive density at a fixed x, reusable across many y values. The
/// prior-predictive part of each draw is a Monte Carlo average over
/// `mc_g0_draws` fresh (μ, β) from G₀.
pub struct PredictiveDensity {
    parts: Vec<DrawMixture>,
}

impl PredictiveDensity {
    pub fn new(
        x: &[f64],
        draws: &PosteriorDraws,
        hyper: &Hyperparams,
        mc_g0_draws: usize,
        rng: &mut RngStream,
    ) -> Result<Self> {
        check_x(draws, x)?;
        let p = x.len();
        let mut parts = Vec::with_capacity(draws.len());
        for d in &draws.draws {
            let alpha = effective_alpha(draws, d);
            let w = urn_allocation_logprobs(x, d, alpha, hyper)?;
            let means = d
                .clusters
                .iter()
                .map(|c| c.mu + c.beta.iter().zip(x).map(|(b, v)| b * v).sum::<f64>())
                .collect();
            let new_prob = w.new_cluster_prob();
            let g0_means = if new_prob > 0.0 {
                (0..mc_g0_draws)
                    .map(|_| {
                        let global = match draws.meta.baseline {
                            Baseline::NormalFull => Some(draw_prior_global(p, hyper, rng)?),
                            _ => None,
                        };
                        let locals = draw_prior_locals(draws.meta.baseline, p, draws.meta.ng_v, rng)?;
                        let (mu, beta) = draw_prior_coefficients(&locals, p, d.sigma2, hyper.nu_mu, global.as_ref(), rng)?;
                        Ok(mu + beta.iter().zip(x).map(|(b, v)| b * v).sum::<f64>())
                    })
                    .collect::<Result<Vec<_>>>()?
            } else {
                Vec::new()
            };
            parts.push(DrawMixture { new_prob, probs: w.cluster_probs(), means, sigma2: d.sigma2, g0_means });
        }
        Ok(Self { parts })
    }

    pub fn density(&self, y: f64) -> f64 {
        let mut total = 0.0;
        for part in &self.parts {
            let mut f = 0.0;
            for (pr, m) in part.probs.iter().zip(&part.means) {
                f += pr * ln_normal_pdf(y, *m, part.sigma2).exp();
            }
            if part.new_prob > 0.0 && !part.g0_means.is_empty() {
                let f0: f64 = part.g0_means.iter().map(|m| ln_normal_pdf(y, *m, part.sigma2).exp()).sum::<f64>()
                    / part.g0_means.len() as f64;
                f += part.new_prob * f0;
            }
            total += f;
        }
        total / self.parts.len() as f64
    }
}

pub fn predictive_density(
    y: f64,
    x: &[f64],
    draws: &PosteriorDraws,
    hyper: &Hyperparams,
    mc_g0_draws: usize,
    rng: &mut RngStream,
) -> Result<f64> {
    Ok(PredictiveDensity::new(x, draws, hyper, mc_g0_draws, rng)?.density(y))
}

//! Draws from the baseline measure G₀.

use nalgebra::DVector;

use crate::dist::{
    sample_exponential, sample_gamma, sample_inverse_gamma, sample_mvn_from_precision_system,
    sample_normal, RngStream,
};
use crate::error::{Error, Result};
use crate::model::cluster::clamp_scale;
use crate::model::{Baseline, ClusterParams, Hyperparams, Locals, NormalGlobal};

/// Covariate parameters (m, τ) from the Normal–inverse-gamma prior.
pub fn draw_prior_covariates(
    p: usize,
    hyper: &Hyperparams,
    rng: &mut RngStream,
) -> Result<(DVector<f64>, DVector<f64>)> {
    let (shape, scale) = hyper.tau_prior();
    let mut m = DVector::zeros(p);
    let mut tau = DVector::zeros(p);
    for l in 0..p {
        tau[l] = clamp_scale(sample_inverse_gamma(shape, scale, rng)?);
        m[l] = sample_normal(hyper.m0, tau[l] / hyper.n0, rng)?;
    }
    Ok((m, tau))
}

fn horseshoe_locals(p: usize, rng: &mut RngStream) -> Result<Locals> {
    let mut nu = DVector::zeros(p);
    let mut gamma2 = DVector::zeros(p);
    for l in 0..p {
        nu[l] = clamp_scale(sample_inverse_gamma(0.5, 1.0, rng)?);
        gamma2[l] = clamp_scale(sample_inverse_gamma(0.5, 1.0 / nu[l], rng)?);
    }
    let xi = clamp_scale(sample_inverse_gamma(0.5, 1.0, rng)?);
    let zeta2 = clamp_scale(sample_inverse_gamma(0.5, 1.0 / xi, rng)?);
    Ok(Locals::Horseshoe { gamma2, zeta2, nu, xi })
}

fn normal_gamma_locals(p: usize, ng_v: f64, rng: &mut RngStream) -> Result<Locals> {
    let lambda = sample_exponential(1.0, rng)?.max(1e-6);
    let gamma_inv2 = clamp_scale(sample_gamma(2.0, 2.0 * lambda / ng_v, rng)?);
    let mut psi = DVector::zeros(p);
    for l in 0..p {
        psi[l] = clamp_scale(sample_gamma(lambda, 2.0 / gamma_inv2, rng)?);
    }
    Ok(Locals::NormalGamma { lambda, gamma_inv2, psi })
}

/// Prior (μ, β) given the locals. Horseshoe slopes scale with σ².
pub fn draw_prior_coefficients(
    locals: &Locals,
    p: usize,
    sigma2: f64,
    nu_mu: f64,
    global: Option<&NormalGlobal>,
    rng: &mut RngStream,
) -> Result<(f64, DVector<f64>)> {
    match locals {
        Locals::Horseshoe { gamma2, zeta2, .. } => {
            let mu = sample_normal(0.0, nu_mu, rng)?;
            let mut beta = DVector::zeros(p);
            for l in 0..p {
                beta[l] = sample_normal(0.0, clamp_scale(zeta2 * sigma2 * gamma2[l]), rng)?;
            }
            Ok((mu, beta))
        }
        Locals::NormalGamma { psi, .. } => {
            let mu = sample_normal(0.0, nu_mu, rng)?;
            let mut beta = DVector::zeros(p);
            for l in 0..p {
                beta[l] = sample_normal(0.0, psi[l], rng)?;
            }
            Ok((mu, beta))
        }
        Locals::NormalFull => {
            let g = global.ok_or_else(|| {
                Error::InvalidParameter("plain-normal baseline needs (eta, Sigma)".into())
            })?;
            let b = &g.precision * &g.eta;
            let c = sample_mvn_from_precision_system(&g.precision, &b, 1.0, rng)?;
            Ok((c[0], c.rows(1, p).into_owned()))
        }
    }
}

/// Shrinkage locals from their priors.
pub fn draw_prior_locals(baseline: Baseline, p: usize, ng_v: Option<f64>, rng: &mut RngStream) -> Result<Locals> {
    Ok(match baseline {
        Baseline::Horseshoe => horseshoe_locals(p, rng)?,
        Baseline::NormalGamma => {
            let v = ng_v.ok_or_else(|| {
                Error::InvalidParameter("normal-gamma baseline needs V".into())
            })?;
            normal_gamma_locals(p, v, rng)?
        }
        Baseline::NormalFull => Locals::NormalFull,
    })
}

/// A full cluster from G₀.
pub fn draw_prior_cluster(
    hyper: &Hyperparams,
    p: usize,
    sigma2: f64,
    ng_v: Option<f64>,
    global: Option<&NormalGlobal>,
    rng: &mut RngStream,
) -> Result<ClusterParams> {
    let locals = draw_prior_locals(hyper.baseline, p, ng_v, rng)?;
    let (mu, beta) = draw_prior_coefficients(&locals, p, sigma2, hyper.nu_mu, global, rng)?;
    let (m, tau) = draw_prior_covariates(p, hyper, rng)?;
    Ok(ClusterParams { mu, beta, m, tau, locals })
}

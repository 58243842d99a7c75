use nalgebra::{DMatrix, DVector};
use statrs::function::gamma::ln_gamma;

use super::linear::{draw_precision_form, draw_svd_form};
use crate::dist::{sample_gamma, sample_gig, slice_sample_step, GigParams, RngStream, DEFAULT_MAX_STEPS, DEFAULT_WIDTH};
use crate::error::{Error, Result};
use crate::model::cluster::clamp_scale;
use crate::model::{ClusterParams, Locals};

pub(crate) const BETA_SQ_FLOOR: f64 = 1e-300;

fn not_ng() -> Error {
    Error::InvalidParameter("cluster does not carry normal-gamma locals".into())
}

/// Unnormalised log full conditional of the shape λ given γ⁻² and ψ:
/// Exp(1) prior, the Ga(λ, rate γ⁻²/2) density of each ψₗ, and the
/// Ga(2, rate V/(2λ)) prior on γ⁻².
pub fn ng_lambda_log_density(lambda: f64, gamma_inv2: f64, psi: &DVector<f64>, v: f64) -> f64 {
    if !(lambda > 0.0) {
        return f64::NEG_INFINITY;
    }
    let p = psi.len() as f64;
    let sum_ln_psi: f64 = psi.iter().map(|x| x.ln()).sum();
    -lambda + p * lambda * (gamma_inv2 / 2.0).ln() - p * ln_gamma(lambda) + lambda * sum_ln_psi
        - 2.0 * lambda.ln()
        - v * gamma_inv2 / (2.0 * lambda)
}

/// One slice-sampling transition for λ.
pub fn ng_draw_lambda(lambda: f64, gamma_inv2: f64, psi: &DVector<f64>, v: f64, rng: &mut RngStream) -> Result<f64> {
    slice_sample_step(
        |l| ng_lambda_log_density(l, gamma_inv2, psi, v),
        lambda,
        DEFAULT_WIDTH,
        DEFAULT_MAX_STEPS,
        rng,
    )
    .map_err(|e| Error::Numerical(format!("lambda update from {lambda}: {e}")))
}

/// γ⁻² | λ, ψ ~ Ga(pλ + 2, rate ½Σψₗ + V/(2λ))
pub fn ng_draw_gamma_inv2(lambda: f64, psi: &DVector<f64>, v: f64, rng: &mut RngStream) -> Result<f64> {
    let rate = 0.5 * psi.sum() + v / (2.0 * lambda);
    Ok(clamp_scale(sample_gamma(psi.len() as f64 * lambda + 2.0, 1.0 / rate, rng)?))
}

/// ψₗ | λ, γ⁻², βₗ ~ GIG(λ − ½, γ⁻², βₗ²), with βₗ² floored away from zero.
pub fn ng_draw_psi(lambda: f64, gamma_inv2: f64, beta: f64, rng: &mut RngStream) -> Result<f64> {
    let d = (beta * beta).max(BETA_SQ_FLOOR);
    Ok(clamp_scale(sample_gig(GigParams::new(lambda - 0.5, gamma_inv2, d)?, rng)))
}

/// λ, then γ⁻², then every ψₗ.
pub fn ng_update_locals(cluster: &mut ClusterParams, v: f64, rng: &mut RngStream) -> Result<()> {
    let beta = &cluster.beta;
    let Locals::NormalGamma { lambda, gamma_inv2, psi } = &mut cluster.locals else {
        return Err(not_ng());
    };
    *lambda = ng_draw_lambda(*lambda, *gamma_inv2, psi, v, rng)?;
    *gamma_inv2 = ng_draw_gamma_inv2(*lambda, psi, v, rng)?;
    for l in 0..psi.len() {
        psi[l] = ng_draw_psi(*lambda, *gamma_inv2, beta[l], rng)?;
    }
    Ok(())
}

pub(crate) fn ng_prior_var(locals: &Locals, nu_mu: f64) -> Result<DVector<f64>> {
    let Locals::NormalGamma { psi, .. } = locals else {
        return Err(not_ng());
    };
    Ok(DVector::from_fn(psi.len() + 1, |k, _| if k == 0 { nu_mu } else { psi[k - 1] }))
}

/// (μ, β) draw: precision form when the cluster has more than p + 1 members,
/// the thin-SVD form otherwise.
pub fn ng_update_coefficients(
    cluster: &mut ClusterParams,
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    sigma2: f64,
    nu_mu: f64,
    rng: &mut RngStream,
) -> Result<()> {
    let prior_var = ng_prior_var(&cluster.locals, nu_mu)?;
    let coef = if x.nrows() == 0 {
        DVector::from_fn(prior_var.len(), |k, _| prior_var[k].sqrt() * crate::dist::standard_normal(rng))
    } else if x.nrows() > x.ncols() {
        draw_precision_form(x, y, sigma2, &prior_var, rng)?
    } else {
        draw_svd_form(x, y, sigma2, &prior_var, rng)?
    };
    cluster.set_coefficients(&coef);
    Ok(())
}

use nalgebra::{DMatrix, DVector};

use super::linear::{draw_data_space, draw_precision_form};
use crate::dist::{sample_inverse_gamma, RngStream};
use crate::error::{Error, Result};
use crate::model::cluster::clamp_scale;
use crate::model::{ClusterParams, Locals};

fn not_horseshoe() -> Error {
    Error::InvalidParameter("cluster does not carry horseshoe locals".into())
}

/// νₗ | γ²ₗ ~ IG(1, 1 + 1/γ²ₗ)
pub fn hs_draw_nu(gamma2: f64, rng: &mut RngStream) -> Result<f64> {
    Ok(clamp_scale(sample_inverse_gamma(1.0, 1.0 + 1.0 / gamma2, rng)?))
}

/// ξ | ζ² ~ IG(1, 1 + 1/ζ²)
pub fn hs_draw_xi(zeta2: f64, rng: &mut RngStream) -> Result<f64> {
    hs_draw_nu(zeta2, rng)
}

/// γ²ₗ | νₗ, βₗ, ζ², σ² ~ IG(1, 1/νₗ + βₗ²/(2ζ²σ²))
pub fn hs_draw_gamma2(nu: f64, beta: f64, zeta2: f64, sigma2: f64, rng: &mut RngStream) -> Result<f64> {
    let scale = 1.0 / nu + beta * beta / (2.0 * zeta2 * sigma2);
    Ok(clamp_scale(sample_inverse_gamma(1.0, scale, rng)?))
}

/// ζ² | ξ, β, γ², σ² ~ IG((p + 1)/2, 1/ξ + Σₗ βₗ²/γ²ₗ / (2σ²))
pub fn hs_draw_zeta2(xi: f64, beta: &DVector<f64>, gamma2: &DVector<f64>, sigma2: f64, rng: &mut RngStream) -> Result<f64> {
    let ratio: f64 = beta.iter().zip(gamma2.iter()).map(|(b, g)| b * b / g).sum();
    let scale = 1.0 / xi + ratio / (2.0 * sigma2);
    Ok(clamp_scale(sample_inverse_gamma((beta.len() as f64 + 1.0) / 2.0, scale, rng)?))
}

/// Conjugate updates of (ν, ξ, γ², ζ²) given β and σ², in that order.
pub fn hs_update_locals(cluster: &mut ClusterParams, sigma2: f64, rng: &mut RngStream) -> Result<()> {
    let beta = &cluster.beta;
    let Locals::Horseshoe { gamma2, zeta2, nu, xi } = &mut cluster.locals else {
        return Err(not_horseshoe());
    };
    for l in 0..beta.len() {
        nu[l] = hs_draw_nu(gamma2[l], rng)?;
    }
    *xi = hs_draw_xi(*zeta2, rng)?;
    for l in 0..beta.len() {
        gamma2[l] = hs_draw_gamma2(nu[l], beta[l], *zeta2, sigma2, rng)?;
    }
    *zeta2 = hs_draw_zeta2(*xi, beta, gamma2, sigma2, rng)?;
    Ok(())
}

/// Prior variances of (μ, β) implied by the horseshoe locals.
pub(crate) fn hs_prior_var(locals: &Locals, sigma2: f64, nu_mu: f64) -> Result<DVector<f64>> {
    let Locals::Horseshoe { gamma2, zeta2, .. } = locals else {
        return Err(not_horseshoe());
    };
    let p = gamma2.len();
    Ok(DVector::from_fn(p + 1, |k, _| {
        if k == 0 {
            nu_mu
        } else {
            clamp_scale(zeta2 * sigma2 * gamma2[k - 1])
        }
    }))
}

/// Joint Gaussian draw of (μ, β) from the member rows `x` (with a leading
/// column of ones) and responses `y`. Empty clusters draw from the prior.
pub fn hs_update_coefficients(
    cluster: &mut ClusterParams,
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    sigma2: f64,
    nu_mu: f64,
    rng: &mut RngStream,
) -> Result<()> {
    let prior_var = hs_prior_var(&cluster.locals, sigma2, nu_mu)?;
    let coef = if x.nrows() == 0 {
        DVector::from_fn(prior_var.len(), |k, _| prior_var[k].sqrt() * crate::dist::standard_normal(rng))
    } else if x.nrows() < x.ncols() {
        draw_data_space(x, y, sigma2, &prior_var, rng)?
    } else {
        draw_precision_form(x, y, sigma2, &prior_var, rng)?
    };
    cluster.set_coefficients(&coef);
    Ok(())
}

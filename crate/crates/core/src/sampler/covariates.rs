use nalgebra::DMatrix;

use crate::dist::{sample_inverse_gamma, sample_normal, RngStream};
use crate::error::Result;
use crate::model::cluster::clamp_scale;
use crate::model::{ClusterParams, Hyperparams};

/// Normal–inverse-gamma update of (mₗ, τₗ) coordinate by coordinate from the
/// member covariate rows (n_j × p, possibly empty).
pub fn update_covariate_params(
    cluster: &mut ClusterParams,
    member_x: &DMatrix<f64>,
    hyper: &Hyperparams,
    rng: &mut RngStream,
) -> Result<()> {
    let nj = member_x.nrows() as f64;
    let n_star = hyper.n0 + nj;
    let nu_star = hyper.nu0 + nj;
    for l in 0..cluster.p() {
        let col = member_x.column(l);
        let (xbar, ss) = if nj > 0.0 {
            let mean = col.mean();
            (mean, col.iter().map(|x| (x - mean).powi(2)).sum::<f64>())
        } else {
            (0.0, 0.0)
        };
        let nu_s2 = ss + hyper.s0_sq * hyper.nu0 + hyper.n0 * nj / n_star * (xbar - hyper.m0).powi(2);
        let tau = clamp_scale(sample_inverse_gamma(nu_star / 2.0, nu_s2 / 2.0, rng)?);
        let m_star = (nj * xbar + hyper.n0 * hyper.m0) / n_star;
        cluster.tau[l] = tau;
        cluster.m[l] = sample_normal(m_star, tau / n_star, rng)?;
    }
    Ok(())
}

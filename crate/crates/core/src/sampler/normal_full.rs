use nalgebra::{DMatrix, DVector};

use crate::dist::{cholesky, sample_mvn_from_precision_system, sample_wishart, RngStream};
use crate::error::Result;
use crate::model::{ClusterParams, Hyperparams, NormalGlobal};

/// (μ, β) ~ N(B⁻¹(Xᵀy/σ² + Σ⁻¹η), B⁻¹) with B = XᵀX/σ² + Σ⁻¹.
pub fn normalfull_update_cluster(
    cluster: &mut ClusterParams,
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    sigma2: f64,
    global: &NormalGlobal,
    rng: &mut RngStream,
) -> Result<()> {
    let mut b = x.tr_mul(x) / sigma2;
    b += &global.precision;
    let rhs = x.tr_mul(y) / sigma2 + &global.precision * &global.eta;
    let coef = sample_mvn_from_precision_system(&b, &rhs, 1.0, rng)?;
    cluster.set_coefficients(&coef);
    Ok(())
}

/// η then Σ⁻¹ given the coefficient vectors of the occupied clusters.
pub fn normalfull_update_global(
    global: &mut NormalGlobal,
    coefs: &[DVector<f64>],
    hyper: &Hyperparams,
    rng: &mut RngStream,
) -> Result<()> {
    let dim = global.eta.len();
    let k = coefs.len() as f64;
    let mut prec = &global.precision * k;
    for d in 0..dim {
        prec[(d, d)] += 1.0 / hyper.normalfull_eta_var;
    }
    let sum = coefs.iter().fold(DVector::zeros(dim), |acc, c| acc + c);
    let rhs = &global.precision * sum;
    global.eta = sample_mvn_from_precision_system(&prec, &rhs, 1.0, rng)?;

    let mut s = DMatrix::identity(dim, dim) / hyper.normalfull_wishart_scale;
    for c in coefs {
        let r = c - &global.eta;
        s += &r * r.transpose();
    }
    let scale = cholesky(s)?.inverse();
    let df = hyper.wishart_df(dim - 1) + k;
    global.precision = sample_wishart(df, &scale, rng)?;
    Ok(())
}

use log::warn;
use nalgebra::{DMatrix, DVector};

use super::{Baseline, Dataset, Hyperparams, MixtureState, NormalGlobal};
use crate::dist::{sample_gamma, sample_inverse_gamma, sample_mvn_from_covariance, sample_wishart, RngStream};
use crate::error::{Error, Result};
use crate::sampler::prior::draw_prior_cluster;
use crate::sampler::update_weights_and_slices;

const V_FLOOR: f64 = 1e-12;
const RIDGE: f64 = 1e-8;

fn solve_spd(mut a: DMatrix<f64>, b: &DVector<f64>, what: &str) -> Result<DVector<f64>> {
    if let Some(ch) = a.clone().cholesky() {
        return Ok(ch.solve(b));
    }
    warn!("{what} is singular, adding {RIDGE:e} ridge");
    for k in 0..a.nrows() {
        a[(k, k)] += RIDGE;
    }
    a.cholesky()
        .map(|ch| ch.solve(b))
        .ok_or_else(|| Error::Numerical(format!("{what} is not positive definite even after ridge")))
}

/// Scale V of the normal-gamma hyperprior: mean squared least-squares slope.
///
/// With n ≥ p + 1 the ordinary least-squares fit is used and the sum is
/// divided by p; otherwise the minimum-norm solution X̃ᵀ(X̃X̃ᵀ)⁻¹y is used and
/// the sum is divided by n.
pub fn compute_ng_v(data: &Dataset) -> Result<f64> {
    let (n, p) = (data.n(), data.p());
    let xt = data.design_rows(&(0..n).collect::<Vec<_>>());
    let (theta, denom) = if n > p {
        let gram = xt.tr_mul(&xt);
        (solve_spd(gram, &xt.tr_mul(&data.y), "gram matrix")?, p as f64)
    } else {
        let outer = &xt * xt.transpose();
        let a = solve_spd(outer, &data.y, "outer gram matrix")?;
        (xt.tr_mul(&a), n as f64)
    };
    let v = theta.rows(1, p).norm_squared() / denom;
    if !(v >= V_FLOOR) {
        warn!("normal-gamma scale V = {v:e} floored to {V_FLOOR:e}");
        return Ok(V_FLOOR);
    }
    Ok(v)
}

/// Prior expected number of clusters among n draws from a DP with mass α.
pub fn expected_clusters_prior(alpha: f64, n: usize) -> f64 {
    (0..n).map(|i| alpha / (alpha + i as f64)).sum()
}

/// Starting state: uniform random labels over 0..n, everything else from
/// its prior. Sticks and slice variables are drawn given those labels so the
/// returned state already satisfies the slice invariants.
pub fn init_state(data: &Dataset, hyper: &Hyperparams, rng: &mut RngStream) -> Result<MixtureState> {
    hyper.validate()?;
    let (n, p) = (data.n(), data.p());
    for l in data.constant_columns() {
        warn!("covariate {} is constant", data.column_name(l));
    }
    let labels: Vec<usize> = (0..n).map(|_| rng.index(n)).collect();
    let sigma2 = sample_inverse_gamma(hyper.alpha0, hyper.theta0, rng)?;
    let alpha = sample_gamma(hyper.alpha_shape, 1.0 / hyper.alpha_rate, rng)?;
    let ng_v = match hyper.baseline {
        Baseline::NormalGamma => Some(compute_ng_v(data)?),
        _ => None,
    };
    let global = match hyper.baseline {
        Baseline::NormalFull => Some(draw_prior_global(p, hyper, rng)?),
        _ => None,
    };
    let m = labels.iter().max().map_or(0, |l| l + 1);
    let clusters = (0..m)
        .map(|_| draw_prior_cluster(hyper, p, sigma2, ng_v, global.as_ref(), rng))
        .collect::<Result<Vec<_>>>()?;
    let mut state = MixtureState {
        clusters,
        v: Vec::new(),
        w: Vec::new(),
        u: Vec::new(),
        labels,
        sigma2,
        alpha,
        ng_v,
        global,
    };
    update_weights_and_slices(&mut state, hyper, rng)?;
    Ok(state)
}

pub(crate) fn draw_prior_global(p: usize, hyper: &Hyperparams, rng: &mut RngStream) -> Result<NormalGlobal> {
    let dim = p + 1;
    let eta_cov = DMatrix::identity(dim, dim) * hyper.normalfull_eta_var;
    let eta = sample_mvn_from_covariance(&DVector::zeros(dim), &eta_cov, rng)?;
    let scale = DMatrix::identity(dim, dim) * hyper.normalfull_wishart_scale;
    let precision = sample_wishart(hyper.wishart_df(p), &scale, rng)?;
    Ok(NormalGlobal { eta, precision })
}

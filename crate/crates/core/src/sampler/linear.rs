//! Gaussian posterior draws for y ~ N(Xθ, σ²I), θ ~ N(0, diag(prior_var)).

use nalgebra::{DMatrix, DVector};

use crate::dist::{cholesky, draw_with_factor, standard_normal, RngStream};
use crate::error::{Error, Result};

/// Relative cutoff below which singular values are dropped.
pub const SVD_CUTOFF: f64 = 1e-10;

/// Precision form: factor B = XᵀX + σ² diag(1/prior_var) once and draw
/// N(B⁻¹Xᵀy, σ²B⁻¹). One jittered retry if the factorisation fails.
pub fn draw_precision_form(
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    sigma2: f64,
    prior_var: &DVector<f64>,
    rng: &mut RngStream,
) -> Result<DVector<f64>> {
    let mut b = x.tr_mul(x);
    for k in 0..b.nrows() {
        b[(k, k)] += sigma2 / prior_var[k];
    }
    let rhs = x.tr_mul(y);
    let chol = match cholesky(b.clone()) {
        Ok(c) => c,
        Err(_) => {
            let jitter = 1e-10 * b.trace() / b.nrows() as f64;
            for k in 0..b.nrows() {
                b[(k, k)] += jitter;
            }
            cholesky(b)?
        }
    };
    Ok(draw_with_factor(&chol, &rhs, sigma2, rng))
}

/// Sampler of Bhattacharya, Chakraborty and Mallick (2016): exact draw that
/// only factors an n × n system, for use when n < dim θ.
pub fn draw_data_space(
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    sigma2: f64,
    prior_var: &DVector<f64>,
    rng: &mut RngStream,
) -> Result<DVector<f64>> {
    let n = x.nrows();
    let sd = sigma2.sqrt();
    let phi = x / sd;
    let u = DVector::from_fn(prior_var.len(), |k, _| prior_var[k].sqrt() * standard_normal(rng));
    let delta = DVector::from_fn(n, |_, _| standard_normal(rng));
    let v = &phi * &u + delta;
    let phi_d = DMatrix::from_fn(n, prior_var.len(), |i, k| phi[(i, k)] * prior_var[k]);
    let mut m = &phi_d * phi.transpose();
    for i in 0..n {
        m[(i, i)] += 1.0;
    }
    let w = cholesky(m)?.solve(&(y / sd - v));
    Ok(u + phi_d.tr_mul(&w))
}

/// Thin-SVD form X = U D Vᵀ with θ̂ = D⁻¹Uᵀy, A = V, Ψ = diag(prior_var):
/// θ ~ N(ΨAC⁻¹θ̂, Ψ − ΨAC⁻¹AᵀΨ), C = AᵀΨA + σ²D⁻². Modes with singular value
/// below `SVD_CUTOFF` × the largest are dropped.
pub fn draw_svd_form(
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    sigma2: f64,
    prior_var: &DVector<f64>,
    rng: &mut RngStream,
) -> Result<DVector<f64>> {
    let parts = SvdParts::new(x, y)?;
    let r = parts.s.len();
    let dim = prior_var.len();
    let u = DVector::from_fn(dim, |k, _| prior_var[k].sqrt() * standard_normal(rng));
    let delta = DVector::from_fn(r, |k, _| sigma2.sqrt() / parts.s[k] * standard_normal(rng));
    let v = parts.a.tr_mul(&u) + delta;
    let psi_a = DMatrix::from_fn(dim, r, |k, c| prior_var[k] * parts.a[(k, c)]);
    let mut c = parts.a.tr_mul(&psi_a);
    for k in 0..r {
        c[(k, k)] += sigma2 / (parts.s[k] * parts.s[k]);
    }
    let w = cholesky(c)?.solve(&(&parts.theta_hat - v));
    Ok(u + psi_a * w)
}

/// Pieces of the reduced problem θ̂ ~ N(Aᵀθ, σ²D⁻²).
pub struct SvdParts {
    pub s: DVector<f64>,
    pub a: DMatrix<f64>,
    pub theta_hat: DVector<f64>,
}

impl SvdParts {
    pub fn new(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<Self> {
        let svd = x.clone().svd(true, true);
        let (u, vt) = match (svd.u, svd.v_t) {
            (Some(u), Some(vt)) => (u, vt),
            _ => return Err(Error::Numerical("svd did not return singular vectors".into())),
        };
        let s_max = svd.singular_values.max();
        if !(s_max > 0.0) {
            return Err(Error::Numerical("design matrix is zero".into()));
        }
        let keep: Vec<usize> = (0..svd.singular_values.len())
            .filter(|&k| svd.singular_values[k] > SVD_CUTOFF * s_max)
            .collect();
        let s = DVector::from_iterator(keep.len(), keep.iter().map(|&k| svd.singular_values[k]));
        let a = DMatrix::from_fn(x.ncols(), keep.len(), |row, c| vt[(keep[c], row)]);
        let theta_hat = DVector::from_fn(keep.len(), |c, _| u.column(keep[c]).dot(y) / s[c]);
        Ok(Self { s, a, theta_hat })
    }
}

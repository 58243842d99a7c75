use super::Prepared;
use crate::dist::{sample_beta, sample_gamma, sample_inverse_gamma, RngStream};
use crate::error::Result;
use crate::model::{Baseline, Hyperparams, Locals, MixtureState};

/// Σᵢ (yᵢ − μ_{dᵢ} − xᵢᵀβ_{dᵢ})²
pub fn residual_sum_of_squares(state: &MixtureState, prep: &Prepared) -> f64 {
    let p = prep.data.p();
    state
        .labels
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let c = &state.clusters[d];
            let mut fit = c.mu;
            for l in 0..p {
                fit += prep.data.x[(i, l)] * c.beta[l];
            }
            (prep.data.y[i] - fit).powi(2)
        })
        .sum()
}

/// InvGamma shape and igscale of the σ² conditional.
///
/// Under the horseshoe the slopes' prior variance carries σ², so every
/// occupied cluster adds p/2 to the shape and its scaled β²/(ζ²γ²) sum to the
/// scale.
pub fn sigma2_conditional(state: &MixtureState, prep: &Prepared, hyper: &Hyperparams) -> (f64, f64) {
    let n = prep.data.n() as f64;
    let sse = residual_sum_of_squares(state, prep);
    let mut shape = n / 2.0 + hyper.alpha0;
    let mut scale = sse / 2.0 + hyper.theta0;
    if hyper.baseline == Baseline::Horseshoe {
        let counts = state.counts();
        for (j, c) in state.clusters.iter().enumerate() {
            if counts.get(j).copied().unwrap_or(0) == 0 {
                continue;
            }
            if let Locals::Horseshoe { gamma2, zeta2, .. } = &c.locals {
                shape += c.p() as f64 / 2.0;
                let q: f64 = c.beta.iter().zip(gamma2.iter()).map(|(b, g)| b * b / g).sum();
                scale += q / (2.0 * zeta2);
            }
        }
    }
    (shape, scale)
}

pub fn update_sigma2(state: &mut MixtureState, prep: &Prepared, hyper: &Hyperparams, rng: &mut RngStream) -> Result<()> {
    let (shape, scale) = sigma2_conditional(state, prep, hyper);
    state.sigma2 = sample_inverse_gamma(shape, scale, rng)?;
    Ok(())
}

/// Escobar–West auxiliary-variable update of the DP mass with K occupied
/// clusters among n rows. The prior is Gamma(shape, rate).
pub fn update_alpha(state: &mut MixtureState, hyper: &Hyperparams, n: usize, rng: &mut RngStream) -> Result<()> {
    let k = state.n_occupied();
    state.alpha = draw_alpha(state.alpha, k, n, hyper.alpha_shape, hyper.alpha_rate, rng)?;
    Ok(())
}

pub fn draw_alpha(alpha: f64, k: usize, n: usize, shape: f64, rate: f64, rng: &mut RngStream) -> Result<f64> {
    let eta = sample_beta(alpha + 1.0, n as f64, rng)?;
    let rate_post = rate - eta.ln();
    let odds = (shape + k as f64 - 1.0) / (rate_post * n as f64);
    let pi = odds / (1.0 + odds);
    let a = if rng.uniform() < pi { shape + k as f64 } else { shape + k as f64 - 1.0 };
    Ok(sample_gamma(a, 1.0 / rate_post, rng)?.max(f64::MIN_POSITIVE))
}

use super::prior::draw_prior_cluster;
use crate::dist::{sample_beta, RngStream};
use crate::error::{Error, Result};
use crate::model::{Hyperparams, MixtureState};

/// The truncation may grow to `TRUNCATION_FACTOR * n + TRUNCATION_SLACK`
/// sticks before it is declared runaway. The first sweeps from the
/// all-distinct start have α in the teens, and covering a slice variable of
/// 1e-6 then takes a few hundred sticks beyond n.
pub const TRUNCATION_FACTOR: usize = 10;
pub const TRUNCATION_SLACK: usize = 50;

/// Redraws the sticks of the occupied range and the slice variables, then
/// extends the truncation with prior sticks and prior clusters until the
/// leftover stick mass is below every slice variable.
pub fn update_weights_and_slices(
    state: &mut MixtureState,
    hyper: &Hyperparams,
    rng: &mut RngStream,
) -> Result<()> {
    let n = state.labels.len();
    let m = state.max_label();
    let mut counts = vec![0usize; m];
    for &d in &state.labels {
        counts[d] += 1;
    }
    state.clusters.truncate(m);
    state.v.clear();
    state.w.clear();
    let mut above = n;
    let mut rest = 1.0;
    for &nj in &counts {
        above -= nj;
        let v = sample_beta(1.0 + nj as f64, state.alpha + above as f64, rng)?;
        state.v.push(v);
        state.w.push(v * rest);
        rest *= 1.0 - v;
    }
    state.u.clear();
    for (i, &d) in state.labels.iter().enumerate() {
        let u = rng.uniform() * state.w[d];
        if !(u > 0.0) {
            return Err(Error::Numerical(format!(
                "weight of cluster {d} underflowed (w = {}) for row {i}",
                state.w[d]
            )));
        }
        state.u.push(u);
    }
    let u_min = state.u.iter().cloned().fold(f64::INFINITY, f64::min);
    let p = state.clusters.first().map_or(0, |c| c.p());
    while rest >= u_min {
        if state.clusters.len() >= TRUNCATION_FACTOR * n + TRUNCATION_SLACK {
            return Err(Error::Numerical(format!(
                "truncation reached {} sticks with leftover mass {rest:e} above min slice {u_min:e} (alpha = {})",
                state.clusters.len(),
                state.alpha
            )));
        }
        let v = sample_beta(1.0, state.alpha, rng)?;
        state.v.push(v);
        state.w.push(v * rest);
        rest *= 1.0 - v;
        let c = draw_prior_cluster(hyper, p, state.sigma2, state.ng_v, state.global.as_ref(), rng)?;
        state.clusters.push(c);
    }
    Ok(())
}

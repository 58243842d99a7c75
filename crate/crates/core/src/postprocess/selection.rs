use nalgebra::{DMatrix, DVector};

use super::metrics::average_squared_error;
use super::vi::ClusterEstimate;
use crate::error::{check_same_len, Error, Result};
use crate::model::{PosteriorDraw, PosteriorDraws};

/// Scaled-neighbourhood selection. `p[(i, l)]` is the posterior probability
/// that βₗ of row i's cluster lies within one posterior sd of zero; the
/// covariate is excluded for that row when it exceeds the threshold.
#[derive(Clone, Debug, PartialEq)]
pub struct SelectionReport {
    pub p: DMatrix<f64>,
    pub selected: DMatrix<bool>,
    pub threshold: f64,
    /// Posterior medians of β for each estimated cluster.
    pub beta_medians: Vec<DVector<f64>>,
    /// Draws in which an estimated cluster could not be matched.
    pub skipped_draws: usize,
}

/// Label of the draw's cluster holding the plurality of `members`; ties go
/// to the smaller label.
pub fn match_cluster(members: &[usize], draw: &PosteriorDraw) -> Option<usize> {
    let mut counts = vec![0usize; draw.clusters.len()];
    for &i in members {
        counts[draw.partition.labels()[i]] += 1;
    }
    let mut best: Option<(usize, usize)> = None;
    for (j, &c) in counts.iter().enumerate() {
        if c > 0 && best.is_none_or(|(_, bc)| c > bc) {
            best = Some((j, c));
        }
    }
    best.map(|b| b.0)
}

/// For every estimated cluster, the slope vectors of its matched cluster in
/// each draw, plus the number of unmatched (cluster, draw) pairs.
fn matched_slopes(draws: &PosteriorDraws, estimate: &ClusterEstimate) -> Result<(Vec<Vec<DVector<f64>>>, usize)> {
    if draws.is_empty() {
        return Err(Error::Data("no posterior draws".into()));
    }
    check_same_len(draws.meta.n, estimate.partition.len())?;
    let mut skipped = 0;
    let out = estimate
        .partition
        .members()
        .iter()
        .map(|members| {
            draws
                .draws
                .iter()
                .filter_map(|d| match match_cluster(members, d) {
                    Some(j) => Some(d.clusters[j].beta.clone()),
                    None => {
                        skipped += 1;
                        None
                    }
                })
                .collect()
        })
        .collect();
    Ok((out, skipped))
}

/// Fraction of values with |β| ≤ sd, where sd is the (population) standard
/// deviation of the values themselves.
pub fn sn_probability(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let sd = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
    values.iter().filter(|v| v.abs() <= sd).count() as f64 / n
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.total_cmp(b));
    let n = values.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

fn coordinate(draws: &[DVector<f64>], l: usize) -> Vec<f64> {
    draws.iter().map(|b| b[l]).collect()
}

pub fn sn_select(draws: &PosteriorDraws, estimate: &ClusterEstimate, threshold: f64) -> Result<SelectionReport> {
    let (slopes, skipped) = matched_slopes(draws, estimate)?;
    let p = draws.meta.p;
    let n = estimate.partition.len();
    let per_cluster: Vec<DVector<f64>> = slopes
        .iter()
        .map(|s| DVector::from_fn(p, |l, _| sn_probability(&coordinate(s, l))))
        .collect();
    let beta_medians = slopes
        .iter()
        .map(|s| DVector::from_fn(p, |l, _| median(&mut coordinate(s, l))))
        .collect();
    let labels = estimate.partition.labels();
    let prob = DMatrix::from_fn(n, p, |i, l| per_cluster[labels[i]][l]);
    let selected = prob.map(|v| v <= threshold);
    if skipped > 0 {
        log::warn!("{skipped} cluster/draw pairs could not be matched");
    }
    Ok(SelectionReport { p: prob, selected, threshold, beta_medians, skipped_draws: skipped })
}

/// Average squared error of the per-cluster posterior-median slopes against
/// the true slopes of each row (n × p).
pub fn ase(draws: &PosteriorDraws, estimate: &ClusterEstimate, true_betas: &DMatrix<f64>) -> Result<f64> {
    let (slopes, _) = matched_slopes(draws, estimate)?;
    let p = true_betas.ncols();
    let medians: Vec<DVector<f64>> = slopes
        .iter()
        .map(|s| DVector::from_fn(p, |l, _| median(&mut coordinate(s, l))))
        .collect();
    let labels = estimate.partition.labels();
    let est = DMatrix::from_fn(true_betas.nrows(), p, |i, l| medians[labels[i]][l]);
    average_squared_error(&est, true_betas)
}

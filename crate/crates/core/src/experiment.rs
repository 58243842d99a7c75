//! Simulation and cross-validation harness: fit, predict, estimate the
//! clustering and score it.

use std::time::Instant;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::dist::RngStream;
use crate::error::{Error, Result};
use crate::model::{Baseline, Dataset, Hyperparams, NormState, Partition, PosteriorDraws};
use crate::postprocess::{
    a_auc, adjusted_rand_index, ase, greedy_vi_estimate, prediction_errors, sn_select, ClusterEstimate,
};
use crate::predict::predict_rows;
use crate::sampler::{run_chain, ChainConfig};
use crate::simulate::generate_paper_train_test;

/// A fitted model: one of the three DP mixtures or the single-cluster
/// horseshoe regression.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "hs")]
    HsDpm,
    #[serde(rename = "ng")]
    NgDpm,
    #[serde(rename = "n")]
    NDpm,
    #[serde(rename = "hs-linear")]
    HsLinear,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::HsDpm, Method::NgDpm, Method::NDpm, Method::HsLinear];

    pub fn tag(&self) -> &'static str {
        match self {
            Method::HsDpm => "hs",
            Method::NgDpm => "ng",
            Method::NDpm => "n",
            Method::HsLinear => "hs-linear",
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        Method::ALL.into_iter().find(|m| m.tag() == s)
    }

    pub fn baseline(&self) -> Baseline {
        match self {
            Method::HsDpm | Method::HsLinear => Baseline::Horseshoe,
            Method::NgDpm => Baseline::NormalGamma,
            Method::NDpm => Baseline::NormalFull,
        }
    }

    pub fn single_cluster(&self) -> bool {
        *self == Method::HsLinear
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FitSettings {
    pub iterations: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub greedy_sweeps: usize,
    pub p_star: f64,
    pub n_test: usize,
}

impl Default for FitSettings {
    fn default() -> Self {
        Self { iterations: 5000, burn_in: 2000, thin: 1, greedy_sweeps: 50, p_star: 0.5, n_test: 100 }
    }
}

impl FitSettings {
    pub fn chain(&self, method: Method, seed: u64) -> ChainConfig {
        ChainConfig {
            iterations: self.iterations,
            burn_in: self.burn_in,
            thin: self.thin,
            seed,
            store_covariate_params: true,
            single_cluster: method.single_cluster(),
        }
    }
}

/// Fits `method` and returns the draws.
pub fn fit(data: &Dataset, method: Method, hyper: &Hyperparams, settings: &FitSettings, seed: u64) -> Result<PosteriorDraws> {
    let hyper = Hyperparams { baseline: method.baseline(), ..hyper.clone() };
    run_chain(data, &hyper, &settings.chain(method, seed))
}

/// VI point estimate of the clustering from the draws.
pub fn estimate_clustering(draws: &PosteriorDraws, sweeps: usize, seed: u64) -> Result<ClusterEstimate> {
    let parts: Vec<Partition> = draws.partitions();
    let n = draws.meta.n;
    greedy_vi_estimate(&parts, n, sweeps, &mut RngStream::new(seed))
}

/// Simulated benchmark condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Condition {
    pub n: usize,
    pub p: usize,
    pub j: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplicationMetrics {
    pub l1: f64,
    pub l2: f64,
    pub ari: f64,
    pub j_hat: usize,
    pub ase: f64,
    pub a_auc: f64,
    pub seconds: f64,
}

/// Seed of replication `rep` of a condition; fixed by the condition so
/// every method sees the same data.
pub fn replication_seed(base: u64, cond: &Condition, rep: usize) -> u64 {
    RngStream::new(base)
        .substream(((cond.n as u64) << 40) ^ ((cond.p as u64) << 20) ^ ((cond.j as u64) << 10) ^ rep as u64)
        .seed()
}

/// Simulate, fit, predict the held-out rows and score everything.
pub fn run_replication(
    cond: &Condition,
    method: Method,
    hyper: &Hyperparams,
    settings: &FitSettings,
    seed: u64,
) -> Result<ReplicationMetrics> {
    let start = Instant::now();
    let ((train, truth), (test, _)) = generate_paper_train_test(cond.n, cond.p, cond.j, settings.n_test, seed)?;
    let chain_seed = RngStream::new(seed).substream(2).seed();
    let draws = fit(&train, method, hyper, settings, chain_seed)?;
    let hyper = Hyperparams { baseline: method.baseline(), ..hyper.clone() };
    let pred = predict_rows(&test.x, &draws, &hyper)?;
    let (l1, l2) = prediction_errors(&test.y, &pred)?;
    let est = estimate_clustering(&draws, settings.greedy_sweeps, seed)?;
    let ari = adjusted_rand_index(&est.partition, &truth.partition())?;
    let sel = sn_select(&draws, &est, settings.p_star)?;
    let true_beta = truth.beta_per_obs();
    let nonzero = true_beta.map(|b| b != 0.0);
    Ok(ReplicationMetrics {
        l1,
        l2,
        ari,
        j_hat: est.k,
        ase: ase(&draws, &est, &true_beta)?,
        a_auc: a_auc(&sel.p, &nonzero)?,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Mean and standard error (sd/√R) of one metric over replications.
pub fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let r = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / r;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (r - 1.0);
    (mean, (var / r).sqrt())
}

/// Fold id of each row: a seeded shuffle dealt round-robin, so fold sizes
/// differ by at most one.
pub fn cv_folds(n: usize, folds: usize, seed: u64) -> Result<Vec<usize>> {
    if folds < 2 || folds > n {
        return Err(Error::InvalidParameter(format!("need 2 <= folds <= n, got folds = {folds}, n = {n}")));
    }
    let mut rng = RngStream::new(seed);
    let mut order: Vec<usize> = (0..n).collect();
    for k in (1..n).rev() {
        order.swap(k, rng.index(k + 1));
    }
    let mut fold = vec![0; n];
    for (pos, &i) in order.iter().enumerate() {
        fold[i] = pos % folds;
    }
    Ok(fold)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub fold: usize,
    pub n_train: usize,
    pub n_test: usize,
    pub l1: f64,
    pub l2: f64,
}

/// One fold of K-fold cross-validation. The training split is z-scored
/// with its own column means and sds, the test split is transformed with the
/// same scaling, and errors are measured on the normalised response scale.
pub fn cross_validate_fold(
    data: &Dataset,
    method: Method,
    hyper: &Hyperparams,
    settings: &FitSettings,
    assignment: &[usize],
    k: usize,
    seed: u64,
) -> Result<FoldResult> {
    if assignment.len() != data.n() {
        return Err(Error::LengthMismatch { left: assignment.len(), right: data.n() });
    }
    let hyper = Hyperparams { baseline: method.baseline(), ..hyper.clone() };
    let test_idx: Vec<usize> = (0..data.n()).filter(|&i| assignment[i] == k).collect();
    let train_idx: Vec<usize> = (0..data.n()).filter(|&i| assignment[i] != k).collect();
    if test_idx.is_empty() {
        return Err(Error::Data(format!("fold {k} is empty")));
    }
    let train_raw = data.subset(&train_idx)?;
    let norm = NormState::fit(&train_raw)?;
    let train = norm.normalize(&train_raw)?;
    let test_x = norm.normalize_covariates(&DMatrix::from_fn(test_idx.len(), data.p(), |r, c| {
        data.x[(test_idx[r], c)]
    }));
    let test_y = nalgebra::DVector::from_fn(test_idx.len(), |r, _| norm.response.apply(data.y[test_idx[r]]));
    let chain_seed = RngStream::new(seed).substream(k as u64 + 1).seed();
    let draws = run_chain(&train, &hyper, &settings.chain(method, chain_seed))?;
    let pred = predict_rows(&test_x, &draws, &hyper)?;
    let (l1, l2) = prediction_errors(&test_y, &pred)?;
    Ok(FoldResult { fold: k, n_train: train_idx.len(), n_test: test_idx.len(), l1, l2 })
}

/// K-fold cross-validation with seeded fold assignment; see
/// [`cross_validate_fold`].
pub fn cross_validate(
    data: &Dataset,
    method: Method,
    hyper: &Hyperparams,
    settings: &FitSettings,
    folds: usize,
    seed: u64,
) -> Result<Vec<FoldResult>> {
    let assignment = cv_folds(data.n(), folds, seed)?;
    (0..folds)
        .map(|k| cross_validate_fold(data, method, hyper, settings, &assignment, k, seed))
        .collect()
}

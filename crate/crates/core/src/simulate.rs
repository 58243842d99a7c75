//! Synthetic mixtures of linear regressions.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dist::{sample_normal, RngStream};
use crate::error::{check_positive, Error, Result};
use crate::model::{Dataset, Partition};

/// Largest number of nonzero slopes any recipe component has.
pub const MAX_SUPPORT: usize = 5;
pub const MAX_COMPONENTS: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub mu: f64,
    pub beta: Vec<f64>,
    pub m: Vec<f64>,
    pub tau: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimTruth {
    /// 0-based component of each row.
    pub labels: Vec<usize>,
    pub components: Vec<Component>,
    pub sigma2: f64,
}

impl SimTruth {
    pub fn partition(&self) -> Partition {
        Partition::from_labels(&self.labels)
    }

    /// Row i holds the slopes of the component that generated row i.
    pub fn beta_per_obs(&self) -> DMatrix<f64> {
        let p = self.components[0].beta.len();
        DMatrix::from_fn(self.labels.len(), p, |i, l| self.components[self.labels[i]].beta[l])
    }

    pub fn n_components(&self) -> usize {
        self.components.len()
    }
}

/// Component `j` (1-based) of the benchmark recipe: covariate means 2j,
/// unit covariate variances, intercept 10 − 2(j − 1) for j ≤ 5 and 10 − 2j
/// after, and a leading run of slopes equal to 3 (6 − j of them) for j ≤ 5
/// or −3 (j − 5 of them) for j > 5.
pub fn paper_component(j: usize, p: usize) -> Result<Component> {
    if !(1..=MAX_COMPONENTS).contains(&j) {
        return Err(Error::InvalidParameter(format!("component index {j} outside 1..={MAX_COMPONENTS}")));
    }
    if p < MAX_SUPPORT {
        return Err(Error::InvalidParameter(format!(
            "p = {p} is smaller than the largest slope support ({MAX_SUPPORT})"
        )));
    }
    let jf = j as f64;
    let (mu, support, value) = if j <= 5 {
        (10.0 - 2.0 * (jf - 1.0), 6 - j, 3.0)
    } else {
        (10.0 - 2.0 * jf, j - 5, -3.0)
    };
    let beta = (0..p).map(|l| if l < support { value } else { 0.0 }).collect();
    Ok(Component { mu, beta, m: vec![2.0 * jf; p], tau: vec![1.0; p] })
}

/// Benchmark data with `n_components` equally likely components and unit
/// noise variance.
pub fn generate_paper_dataset(n: usize, p: usize, n_components: usize, seed: u64) -> Result<(Dataset, SimTruth)> {
    if n_components == 0 {
        return Err(Error::InvalidParameter("need at least one component".into()));
    }
    let comps = (1..=n_components)
        .map(|j| paper_component(j, p))
        .collect::<Result<Vec<_>>>()?;
    generate_generic_mixture(&comps, 1.0, n, seed)
}

/// Training set plus an independent test set of `n_test` rows. The test
/// seed is derived from `seed` so neither set depends on the other's size.
pub fn generate_paper_train_test(
    n: usize,
    p: usize,
    n_components: usize,
    n_test: usize,
    seed: u64,
) -> Result<((Dataset, SimTruth), (Dataset, SimTruth))> {
    let root = RngStream::new(seed);
    let train = generate_paper_dataset(n, p, n_components, root.substream(0).seed())?;
    let test = generate_paper_dataset(n_test, p, n_components, root.substream(1).seed())?;
    Ok((train, test))
}

/// Rows from an equal-weight mixture of the given components.
pub fn generate_generic_mixture(components: &[Component], sigma2: f64, n: usize, seed: u64) -> Result<(Dataset, SimTruth)> {
    check_positive("sigma2", sigma2)?;
    let first = components
        .first()
        .ok_or_else(|| Error::InvalidParameter("need at least one component".into()))?;
    let p = first.beta.len();
    for (k, c) in components.iter().enumerate() {
        if c.beta.len() != p || c.m.len() != p || c.tau.len() != p {
            return Err(Error::InvalidParameter(format!("component {k} does not have p = {p} entries")));
        }
        for &t in &c.tau {
            check_positive("tau", t)?;
        }
    }
    let mut rng = RngStream::new(seed);
    let labels: Vec<usize> = (0..n).map(|_| rng.index(components.len())).collect();
    let mut x = DMatrix::zeros(n, p);
    let mut y = DVector::zeros(n);
    for i in 0..n {
        let c = &components[labels[i]];
        let mut mean = c.mu;
        for l in 0..p {
            x[(i, l)] = sample_normal(c.m[l], c.tau[l], &mut rng)?;
            mean += x[(i, l)] * c.beta[l];
        }
        y[i] = sample_normal(mean, sigma2, &mut rng)?;
    }
    let data = Dataset::new(y, x)?;
    Ok((data, SimTruth { labels, components: components.to_vec(), sigma2 }))
}

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mean and standard deviation of one column, learned from training data.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColumnScale {
    pub mean: f64,
    pub sd: f64,
}

impl ColumnScale {
    pub fn fit(values: impl Iterator<Item = f64> + Clone) -> Option<Self> {
        let n = values.clone().count();
        if n < 2 {
            return None;
        }
        let mean = values.clone().sum::<f64>() / n as f64;
        let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
        let sd = var.sqrt();
        (sd > 0.0 && sd.is_finite()).then_some(Self { mean, sd })
    }

    pub fn apply(&self, v: f64) -> f64 {
        (v - self.mean) / self.sd
    }

    pub fn invert(&self, z: f64) -> f64 {
        z * self.sd + self.mean
    }
}

/// z-score state for the response and every covariate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormState {
    pub response: ColumnScale,
    pub covariates: Vec<ColumnScale>,
}

impl NormState {
    /// Learn the transform from `data`; constant columns are an error.
    pub fn fit(data: &Dataset) -> Result<Self> {
        let name = |l: usize| data.column_name(l);
        let response = ColumnScale::fit(data.y.iter().cloned())
            .ok_or_else(|| Error::Data("response column is constant".into()))?;
        let covariates = (0..data.p())
            .map(|l| {
                ColumnScale::fit(data.x.column(l).iter().cloned())
                    .ok_or_else(|| Error::Data(format!("covariate column '{}' is constant", name(l))))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { response, covariates })
    }

    pub fn normalize(&self, data: &Dataset) -> Result<Dataset> {
        if self.covariates.len() != data.p() {
            return Err(Error::Data(format!(
                "normalisation has {} covariates, data has {}",
                self.covariates.len(),
                data.p()
            )));
        }
        let y = data.y.map(|v| self.response.apply(v));
        let x = DMatrix::from_fn(data.n(), data.p(), |i, l| self.covariates[l].apply(data.x[(i, l)]));
        let mut out = Dataset::new(y, x)?;
        out.column_names = data.column_names.clone();
        out.norm_state = Some(self.clone());
        Ok(out)
    }

    pub fn normalize_covariates(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        DMatrix::from_fn(x.nrows(), x.ncols(), |i, l| self.covariates[l].apply(x[(i, l)]))
    }

    pub fn denormalize_response(&self, z: f64) -> f64 {
        self.response.invert(z)
    }
}

/// Response vector and n×p covariate matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub y: DVector<f64>,
    pub x: DMatrix<f64>,
    pub column_names: Option<Vec<String>>,
    pub norm_state: Option<NormState>,
}

impl Dataset {
    pub fn new(y: DVector<f64>, x: DMatrix<f64>) -> Result<Self> {
        if y.len() != x.nrows() {
            return Err(Error::Data(format!(
                "response has {} rows, covariates have {}",
                y.len(),
                x.nrows()
            )));
        }
        if y.len() < 2 {
            return Err(Error::Data("need at least two observations".into()));
        }
        if x.ncols() < 1 {
            return Err(Error::Data("need at least one covariate".into()));
        }
        if let Some(i) = y.iter().position(|v| !v.is_finite()) {
            return Err(Error::Data(format!("non-finite response at row {}", i + 1)));
        }
        if let Some(k) = x.iter().position(|v| !v.is_finite()) {
            let (i, l) = (k % x.nrows(), k / x.nrows());
            return Err(Error::Data(format!(
                "non-finite covariate at row {}, column {}",
                i + 1,
                l + 1
            )));
        }
        Ok(Self {
            y,
            x,
            column_names: None,
            norm_state: None,
        })
    }

    pub fn with_column_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.p() {
            return Err(Error::Data(format!(
                "{} column names for {} covariates",
                names.len(),
                self.p()
            )));
        }
        self.column_names = Some(names);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    pub fn column_name(&self, l: usize) -> String {
        match &self.column_names {
            Some(names) => names[l].clone(),
            None => format!("x{}", l + 1),
        }
    }

    /// Indices of constant covariate columns.
    pub fn constant_columns(&self) -> Vec<usize> {
        (0..self.p())
            .filter(|&l| {
                let c = self.x.column(l);
                c.iter().all(|v| *v == c[0])
            })
            .collect()
    }

    /// Rows selected by `idx`, in that order.
    pub fn subset(&self, idx: &[usize]) -> Result<Dataset> {
        let y = DVector::from_fn(idx.len(), |k, _| self.y[idx[k]]);
        let x = DMatrix::from_fn(idx.len(), self.p(), |k, l| self.x[(idx[k], l)]);
        let mut d = Dataset::new(y, x)?;
        d.column_names = self.column_names.clone();
        Ok(d)
    }

    /// `[1, X]` for the given rows.
    pub fn design_rows(&self, idx: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(idx.len(), self.p() + 1, |k, c| {
            if c == 0 {
                1.0
            } else {
                self.x[(idx[k], c - 1)]
            }
        })
    }
}

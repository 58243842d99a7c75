use nalgebra::{DMatrix, DVector};

use crate::model::Dataset;

/// Per-dataset quantities reused every sweep.
pub struct Prepared<'a> {
    pub data: &'a Dataset,
    /// [1, X]
    pub design: DMatrix<f64>,
    /// Elementwise squares of X.
    pub x_sq: DMatrix<f64>,
}

impl<'a> Prepared<'a> {
    pub fn new(data: &'a Dataset) -> Self {
        let design = data.design_rows(&(0..data.n()).collect::<Vec<_>>());
        let x_sq = data.x.map(|v| v * v);
        Self { data, design, x_sq }
    }

    pub fn member_design(&self, idx: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(idx.len(), self.design.ncols(), |r, c| self.design[(idx[r], c)])
    }

    pub fn member_x(&self, idx: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(idx.len(), self.data.p(), |r, c| self.data.x[(idx[r], c)])
    }

    pub fn member_y(&self, idx: &[usize]) -> DVector<f64> {
        DVector::from_fn(idx.len(), |r, _| self.data.y[idx[r]])
    }
}

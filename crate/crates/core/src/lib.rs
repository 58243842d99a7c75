//! Dirichlet process mixtures of linear regressions with horseshoe,
//! normal-gamma or plain normal priors on the cluster coefficients.

// `!(x > 0.0)` is how parameter checks reject NaN along with bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dist;
mod error;
pub mod experiment;
pub mod model;
pub mod par;
pub mod postprocess;
pub mod predict;
pub mod sampler;
pub mod simulate;

pub use error::{Error, Result};

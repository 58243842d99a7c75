//! Datasets, priors, cluster parameters and chain state.

pub mod cluster;
mod dataset;
mod draws;
mod hyper;
mod init;
mod partition;
mod state;

pub use cluster::{ClusterParams, Locals};
pub use dataset::{ColumnScale, Dataset, NormState};
pub use draws::{DrawnCluster, DrawsMeta, PosteriorDraw, PosteriorDraws, TraceRow};
pub use hyper::{Baseline, Hyperparams};
pub(crate) use init::draw_prior_global;
pub use init::{compute_ng_v, expected_clusters_prior, init_state};
pub use partition::Partition;
pub use state::{MixtureState, NormalGlobal};

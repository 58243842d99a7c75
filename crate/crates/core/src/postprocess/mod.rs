//! Point estimates, variable selection and evaluation metrics.

mod metrics;
mod selection;
mod vi;

pub use metrics::{a_auc, adjusted_rand_index, auc, average_squared_error, prediction_errors, vi_distance};
pub use selection::{ase, match_cluster, sn_select, SelectionReport};
pub use vi::{greedy_vi_estimate, mean_vi_loss, ClusterEstimate};

//! Gibbs and slice updates and the chain driver.

mod allocation;
mod chain;
mod covariates;
mod horseshoe;
pub mod linear;
mod normal_full;
mod normal_gamma;
mod prepared;
pub mod prior;
mod scalars;
mod weights;

pub use allocation::{allocation_log_kernel, update_allocations};
pub use chain::{log_likelihood, run_chain, sweep, update_cluster, update_clusters, ChainConfig};
pub use covariates::update_covariate_params;
pub use horseshoe::{
    hs_draw_gamma2, hs_draw_nu, hs_draw_xi, hs_draw_zeta2, hs_update_coefficients, hs_update_locals,
};
pub use normal_full::{normalfull_update_cluster, normalfull_update_global};
pub use normal_gamma::{
    ng_draw_gamma_inv2, ng_draw_lambda, ng_draw_psi, ng_lambda_log_density, ng_update_coefficients,
    ng_update_locals,
};
pub use prepared::Prepared;
pub use scalars::{draw_alpha, residual_sum_of_squares, sigma2_conditional, update_alpha, update_sigma2};
pub use weights::{update_weights_and_slices, TRUNCATION_FACTOR, TRUNCATION_SLACK};

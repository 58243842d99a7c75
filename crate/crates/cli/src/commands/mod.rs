pub mod cv;
pub mod fit;
pub mod predict;
pub mod report;
pub mod reproduce;
pub mod simulate;

use std::path::PathBuf;

use clap::Args;
use dpmreg::experiment::Method;
use dpmreg::model::Hyperparams;
use dpmreg::sampler::ChainConfig;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

pub fn parse_method(s: &str) -> Result<Method, String> {
    Method::parse(s).ok_or_else(|| format!("unknown baseline '{s}' (expected hs, ng, n or hs-linear)"))
}

/// Baselines parsed from a comma-separated flag.
#[derive(Clone, Debug, PartialEq)]
pub struct MethodList(pub Vec<Method>);

/// Comma-separated list of baselines, duplicates removed, order kept.
pub fn parse_methods(s: &str) -> Result<MethodList, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let m = parse_method(part)?;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    if out.is_empty() {
        return Err("no baselines given".into());
    }
    Ok(MethodList(out))
}

/// Sampler and prior settings shared by `fit` and `cv`.
#[derive(Clone, Debug, Args)]
pub struct ModelArgs {
    /// TOML file with [hyper] and [chain] sections.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Total sweeps including burn-in [default: 5000].
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Discarded initial sweeps [default: 2000].
    #[arg(long)]
    pub burn_in: Option<usize>,
    /// Keep every k-th sweep after burn-in [default: 1].
    #[arg(long)]
    pub thin: Option<usize>,
    /// Master seed [default: 1].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Shape of the Gamma prior on the DP mass.
    #[arg(long)]
    pub alpha_shape: Option<f64>,
    /// Rate of the Gamma prior on the DP mass.
    #[arg(long)]
    pub alpha_rate: Option<f64>,
}

impl ModelArgs {
    /// Defaults, then the config file, then flags.
    pub fn resolve(&self, method: Method) -> CliResult<(Hyperparams, ChainConfig)> {
        let cfg = RunConfig::load(self.config.as_deref())?;
        let mut hyper = cfg.hyper;
        hyper.baseline = method.baseline();
        if let Some(v) = self.alpha_shape {
            hyper.alpha_shape = v;
        }
        if let Some(v) = self.alpha_rate {
            hyper.alpha_rate = v;
        }
        hyper.validate()?;

        let d = ChainConfig::default();
        let chain = ChainConfig {
            iterations: self.iterations.or(cfg.chain.iterations).unwrap_or(d.iterations),
            burn_in: self.burn_in.or(cfg.chain.burn_in).unwrap_or(d.burn_in),
            thin: self.thin.or(cfg.chain.thin).unwrap_or(d.thin),
            seed: self.seed.or(cfg.chain.seed).unwrap_or(d.seed),
            store_covariate_params: true,
            single_cluster: method.single_cluster(),
        };
        chain.validate()?;
        Ok((hyper, chain))
    }
}

pub(crate) fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

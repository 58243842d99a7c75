use std::path::PathBuf;

use clap::Args;
use dpmreg::experiment::Method;
use dpmreg::model::NormState;
use dpmreg::sampler::run_chain;

use super::{parse_method, ModelArgs};
use crate::archive::{Archive, FitInfo};
use crate::error::CliResult;
use crate::io::{fmt_f64, load_dataset, CsvOut};

#[derive(Clone, Debug, Args)]
pub struct FitArgs {
    /// Training CSV with a header row.
    #[arg(long)]
    pub data: PathBuf,
    /// Name of the response column; every other column is a covariate.
    #[arg(long, default_value = "y")]
    pub response: String,
    /// hs, ng, n, or hs-linear (single-cluster horseshoe regression).
    #[arg(long, default_value = "hs", value_parser = parse_method)]
    pub baseline: Method,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Model the log of the response.
    #[arg(long)]
    pub log_response: bool,
    /// Fit on raw values instead of z-scores.
    #[arg(long)]
    pub no_normalize: bool,
    /// Per-sweep trace CSV (iter, sigma2, alpha, k, loglik).
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Output archive.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(a: &FitArgs) -> CliResult<()> {
    let (hyper, chain) = a.model.resolve(a.baseline)?;
    let raw = load_dataset(&a.data, &a.response, a.log_response)?;
    let covariate_names = raw.column_names.clone().unwrap_or_default();
    let (data, norm_state) = if a.no_normalize {
        (raw, None)
    } else {
        let ns = NormState::fit(&raw)?;
        (ns.normalize(&raw)?, Some(ns))
    };
    log::info!(
        "fitting {} on n = {}, p = {} ({} sweeps, burn-in {})",
        a.baseline.tag(),
        data.n(),
        data.p(),
        chain.iterations,
        chain.burn_in
    );
    let draws = run_chain(&data, &hyper, &chain)?;
    if let Some(path) = &a.trace {
        let mut out = CsvOut::create(path, &["iter", "sigma2", "alpha", "k", "loglik"])?;
        for t in &draws.trace {
            out.row([t.iter.to_string(), fmt_f64(t.sigma2), fmt_f64(t.alpha), t.k.to_string(), fmt_f64(t.loglik)])?;
        }
        out.finish()?;
    }
    let archive = Archive {
        info: FitInfo {
            method: a.baseline,
            hyper,
            chain,
            norm_state,
            response_name: a.response.clone(),
            covariate_names,
            log_response: a.log_response,
        },
        draws,
    };
    archive.write(&a.out)?;
    log::info!("wrote {} draws to {}", archive.draws.len(), a.out.display());
    Ok(())
}

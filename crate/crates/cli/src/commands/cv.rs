use std::path::PathBuf;

use clap::Args;
use dpmreg::experiment::{cross_validate_fold, cv_folds, mean_and_se, FitSettings, FoldResult, Method};
use dpmreg::par;

use super::{parse_methods, usage, MethodList, ModelArgs};
use crate::error::CliResult;
use crate::io::{fmt_f64, load_dataset, CsvOut};

#[derive(Clone, Debug, Args)]
pub struct CvArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, default_value = "y")]
    pub response: String,
    /// Comma-separated baselines.
    #[arg(long, default_value = "hs,ng,n,hs-linear", value_parser = parse_methods)]
    pub baselines: MethodList,
    #[arg(long, default_value_t = 5)]
    pub folds: usize,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub log_response: bool,
    /// Metrics CSV: one row per (baseline, fold) plus a mean row per baseline.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(a: &CvArgs) -> CliResult<()> {
    if a.folds < 2 {
        return Err(usage(format!("--folds must be at least 2, got {}", a.folds)));
    }
    let data = load_dataset(&a.data, &a.response, a.log_response)?;
    let methods = &a.baselines.0;
    let settings_of = |m: Method| -> CliResult<_> {
        let (hyper, chain) = a.model.resolve(m)?;
        let settings = FitSettings {
            iterations: chain.iterations,
            burn_in: chain.burn_in,
            thin: chain.thin,
            ..FitSettings::default()
        };
        Ok((hyper, settings, chain.seed))
    };
    let seed = settings_of(methods[0])?.2;
    let assignment = cv_folds(data.n(), a.folds, seed)?;

    let jobs: Vec<(Method, usize)> = methods.iter().flat_map(|&m| (0..a.folds).map(move |k| (m, k))).collect();
    let configs = methods.iter().map(|&m| settings_of(m)).collect::<CliResult<Vec<_>>>()?;
    let results: Vec<FoldResult> = par::try_map_range(jobs.len(), |t| {
        let (m, k) = jobs[t];
        let (hyper, settings, seed) = &configs[methods.iter().position(|&x| x == m).unwrap()];
        log::info!("cv {} fold {k}", m.tag());
        cross_validate_fold(&data, m, hyper, settings, &assignment, k, *seed)
    })?;

    let mut out = CsvOut::create(&a.out, &["baseline", "fold", "n_train", "n_test", "l1", "l2"])?;
    for (t, r) in results.iter().enumerate() {
        out.row([
            jobs[t].0.tag().to_string(),
            r.fold.to_string(),
            r.n_train.to_string(),
            r.n_test.to_string(),
            fmt_f64(r.l1),
            fmt_f64(r.l2),
        ])?;
    }
    for &m in methods {
        let rows: Vec<&FoldResult> = results.iter().zip(&jobs).filter(|(_, j)| j.0 == m).map(|(r, _)| r).collect();
        let l1: Vec<f64> = rows.iter().map(|r| r.l1).collect();
        let l2: Vec<f64> = rows.iter().map(|r| r.l2).collect();
        out.row([
            m.tag().to_string(),
            "mean".to_string(),
            String::new(),
            String::new(),
            fmt_f64(mean_and_se(&l1).0),
            fmt_f64(mean_and_se(&l2).0),
        ])?;
    }
    out.finish()
}

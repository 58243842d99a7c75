use std::path::PathBuf;

use clap::Args;
use dpmreg::experiment::estimate_clustering;
use dpmreg::model::{NormState, PosteriorDraws};
use dpmreg::postprocess::{a_auc, adjusted_rand_index, ase, sn_select, vi_distance};
use dpmreg::model::Partition;
use nalgebra::DMatrix;

use super::simulate::TruthFile;
use super::usage;
use crate::archive::Archive;
use crate::error::{CliError, CliResult};
use crate::io::{fmt_f64, CsvOut};

#[derive(Clone, Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub archive: PathBuf,
    /// Directory for clustering.csv, selection.csv, coefficients.csv and summary.csv.
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Exclusion threshold on the scaled-neighbourhood probability.
    #[arg(long, default_value_t = 0.5)]
    pub p_star: f64,
    /// Maximum greedy sweeps per search start.
    #[arg(long, default_value_t = 50)]
    pub sweeps: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// truth.json from `simulate`; adds ARI, VI, ASE and A-AUC to the summary.
    #[arg(long)]
    pub truth: Option<PathBuf>,
}

/// Slopes mapped back to the units of the input file: βₗ · sd(y) / sd(xₗ).
pub fn slopes_on_input_scale(draws: &PosteriorDraws, norm: Option<&NormState>) -> PosteriorDraws {
    let mut out = draws.clone();
    if let Some(ns) = norm {
        for d in &mut out.draws {
            for c in &mut d.clusters {
                for (l, b) in c.beta.iter_mut().enumerate() {
                    *b *= ns.response.sd / ns.covariates[l].sd;
                }
            }
        }
    }
    out
}

pub fn run(a: &ReportArgs) -> CliResult<()> {
    if !(0.0..=1.0).contains(&a.p_star) {
        return Err(usage(format!("--p-star must lie in [0, 1], got {}", a.p_star)));
    }
    let archive = Archive::read(&a.archive)?;
    let draws = &archive.draws;
    let names = &archive.info.covariate_names;
    let est = estimate_clustering(draws, a.sweeps, a.seed)?;
    let sel = sn_select(draws, &est, a.p_star)?;
    let input_scale = slopes_on_input_scale(draws, archive.info.norm_state.as_ref());
    let sel_input = sn_select(&input_scale, &est, a.p_star)?;
    let labels = est.partition.labels();

    let mut out = CsvOut::create(&a.out_dir.join("clustering.csv"), &["row", "cluster"])?;
    for (i, l) in labels.iter().enumerate() {
        out.row([i.to_string(), l.to_string()])?;
    }
    out.finish()?;

    let members = est.partition.members();
    let mut out = CsvOut::create(&a.out_dir.join("selection.csv"), &["cluster", "covariate", "sn_probability", "selected"])?;
    for (k, m) in members.iter().enumerate() {
        let i = m[0];
        for (l, name) in names.iter().enumerate() {
            out.row([k.to_string(), name.clone(), fmt_f64(sel.p[(i, l)]), sel.selected[(i, l)].to_string()])?;
        }
    }
    out.finish()?;

    let mut out = CsvOut::create(
        &a.out_dir.join("coefficients.csv"),
        &["cluster", "size", "covariate", "median", "median_input_scale"],
    )?;
    for (k, m) in members.iter().enumerate() {
        for (l, name) in names.iter().enumerate() {
            out.row([
                k.to_string(),
                m.len().to_string(),
                name.clone(),
                fmt_f64(sel.beta_medians[k][l]),
                fmt_f64(sel_input.beta_medians[k][l]),
            ])?;
        }
    }
    out.finish()?;

    let excluded = sel.selected.iter().filter(|s| !**s).count();
    let mut summary: Vec<(&str, String)> = vec![
        ("baseline", archive.info.method.tag().to_string()),
        ("n_draws", draws.len().to_string()),
        ("k_hat", est.k.to_string()),
        ("mean_vi_loss", fmt_f64(est.mean_vi_loss)),
        ("p_star", fmt_f64(a.p_star)),
        ("excluded_row_covariate_pairs", excluded.to_string()),
        ("unmatched_cluster_draws", sel.skipped_draws.to_string()),
    ];
    if let Some(path) = &a.truth {
        let truth = TruthFile::read(path)?;
        if truth.train_labels.len() != draws.meta.n {
            return Err(CliError::Data(format!(
                "truth has {} training labels, archive has n = {}",
                truth.train_labels.len(),
                draws.meta.n
            )));
        }
        if truth.components.iter().any(|c| c.beta.len() != draws.meta.p) {
            return Err(CliError::Data("truth components do not match the archive's covariate count".into()));
        }
        let tp = Partition::from_labels(&truth.train_labels);
        let true_beta = DMatrix::from_fn(draws.meta.n, draws.meta.p, |i, l| {
            truth.components[truth.train_labels[i]].beta[l]
        });
        let nonzero = true_beta.map(|b| b != 0.0);
        summary.push(("ari", fmt_f64(adjusted_rand_index(&est.partition, &tp)?)));
        summary.push(("vi_to_truth", fmt_f64(vi_distance(&est.partition, &tp)?)));
        summary.push(("ase", fmt_f64(ase(&input_scale, &est, &true_beta)?)));
        summary.push(("a_auc", fmt_f64(a_auc(&sel.p, &nonzero)?)));
    }
    let mut out = CsvOut::create(&a.out_dir.join("summary.csv"), &["metric", "value"])?;
    for (k, v) in summary {
        out.row([k.to_string(), v])?;
    }
    out.finish()?;
    log::info!("clustering estimate has {} clusters", est.k);
    Ok(())
}

use std::path::{Path, PathBuf};

use clap::Args;
use dpmreg::model::Dataset;
use dpmreg::simulate::{generate_paper_train_test, Component};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::io::{write_bytes, write_matrix};

#[derive(Clone, Debug, Args)]
pub struct SimulateArgs {
    /// Training rows.
    #[arg(long)]
    pub n: usize,
    /// Covariates (at least 5).
    #[arg(long)]
    pub p: usize,
    /// Mixture components.
    #[arg(long = "J", visible_alias = "j")]
    pub j: usize,
    /// Test rows.
    #[arg(long, default_value_t = 100)]
    pub n_test: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Directory for train.csv, test.csv and truth.json.
    #[arg(long)]
    pub out_dir: PathBuf,
}

/// Ground truth written next to the simulated CSVs. Labels are 0-based
/// component indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruthFile {
    pub sigma2: f64,
    pub components: Vec<Component>,
    pub train_labels: Vec<usize>,
    pub test_labels: Vec<usize>,
}

impl TruthFile {
    pub fn read(path: &Path) -> CliResult<Self> {
        let text = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_slice(&text).map_err(|e| CliError::io(path, e))
    }
}

pub fn column_header(p: usize) -> Vec<String> {
    std::iter::once("y".to_string()).chain((1..=p).map(|l| format!("x{l}"))).collect()
}

fn rows(d: &Dataset) -> Vec<Vec<f64>> {
    (0..d.n())
        .map(|i| std::iter::once(d.y[i]).chain(d.x.row(i).iter().copied()).collect())
        .collect()
}

pub fn run(a: &SimulateArgs) -> CliResult<()> {
    let ((train, truth), (test, test_truth)) = generate_paper_train_test(a.n, a.p, a.j, a.n_test, a.seed)?;
    let header = column_header(a.p);
    write_matrix(&a.out_dir.join("train.csv"), &header, &rows(&train))?;
    write_matrix(&a.out_dir.join("test.csv"), &header, &rows(&test))?;
    let file = TruthFile {
        sigma2: truth.sigma2,
        components: truth.components,
        train_labels: truth.labels,
        test_labels: test_truth.labels,
    };
    let json = serde_json::to_vec_pretty(&file).map_err(|e| CliError::Data(e.to_string()))?;
    write_bytes(&a.out_dir.join("truth.json"), &json)?;
    log::info!("wrote {} training and {} test rows to {}", a.n, a.n_test, a.out_dir.display());
    Ok(())
}

//! Command-line driver for `dpmreg`.

pub mod archive;
pub mod commands;
pub mod config;
pub mod error;
pub mod io;

use clap::{Parser, Subcommand};

pub use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "dpmreg", version, about = "Dirichlet process mixtures of shrinkage linear regressions")]
pub struct Cli {
    /// Log progress at info level (RUST_LOG overrides).
    #[arg(short, long, global = true)]
    pub verbose: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a simulated train/test pair and its ground truth.
    Simulate(commands::simulate::SimulateArgs),
    /// Run the sampler on a CSV file and write a posterior archive.
    Fit(commands::fit::FitArgs),
    /// Posterior predictive means (and optional densities) for new rows.
    Predict(commands::predict::PredictArgs),
    /// K-fold cross-validated L1/L2 errors for one or more baselines.
    Cv(commands::cv::CvArgs),
    /// Clustering point estimate, variable selection and coefficient medians.
    Report(commands::report::ReportArgs),
    /// Simulation study: mean and standard error of every metric per condition.
    ReproduceTable1(commands::reproduce::ReproduceArgs),
}

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Simulate(a) => commands::simulate::run(a),
        Command::Fit(a) => commands::fit::run(a),
        Command::Predict(a) => commands::predict::run(a),
        Command::Cv(a) => commands::cv::run(a),
        Command::Report(a) => commands::report::run(a),
        Command::ReproduceTable1(a) => commands::reproduce::run(a),
    }
}

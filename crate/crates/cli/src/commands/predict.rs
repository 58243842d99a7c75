use std::path::PathBuf;

use clap::Args;
use dpmreg::dist::RngStream;
use dpmreg::par;
use dpmreg::predict::{predict_rows, PredictiveDensity, DEFAULT_MC_G0_DRAWS};

use super::usage;
use crate::archive::Archive;
use crate::error::CliResult;
use crate::io::{fmt_f64, read_table, select_columns, CsvOut};

#[derive(Clone, Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub archive: PathBuf,
    /// CSV holding (at least) every covariate column the model was fitted on.
    #[arg(long)]
    pub data: PathBuf,
    /// Predictions CSV: row, prediction, and observed when the response
    /// column is present.
    #[arg(long)]
    pub out: PathBuf,
    /// Density grid "lo,hi,points" on the response scale (log scale with a
    /// log-response archive).
    #[arg(long, allow_hyphen_values = true)]
    pub density_grid: Option<String>,
    /// Long-format density CSV (row, y, density); required with --density-grid.
    #[arg(long)]
    pub density_out: Option<PathBuf>,
    /// Prior-predictive Monte Carlo draws per posterior draw.
    #[arg(long, default_value_t = DEFAULT_MC_G0_DRAWS)]
    pub mc_draws: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

pub fn parse_grid(s: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || usage(format!("density grid must be 'lo,hi,points', got '{s}'"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].parse().map_err(|_| bad())?;
    let k: usize = parts[2].parse().map_err(|_| bad())?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi && k >= 2) {
        return Err(bad());
    }
    Ok((0..k).map(|t| lo + (hi - lo) * t as f64 / (k - 1) as f64).collect())
}

pub fn run(a: &PredictArgs) -> CliResult<()> {
    let archive = Archive::read(&a.archive)?;
    let grid = a.density_grid.as_deref().map(parse_grid).transpose()?;
    if grid.is_some() && a.density_out.is_none() {
        return Err(usage("--density-grid needs --density-out"));
    }
    let table = read_table(&a.data)?;
    let x = select_columns(&table, &archive.info.covariate_names)?;
    let norm = archive.info.norm_state.as_ref();
    let x = match norm {
        Some(ns) => ns.normalize_covariates(&x),
        None => x,
    };
    let hyper = archive.hyper();
    let pred = predict_rows(&x, &archive.draws, &hyper)?;
    let to_response = |z: f64| norm.map_or(z, |ns| ns.denormalize_response(z));

    let observed = table.column_index(&archive.info.response_name).map(|c| {
        table
            .column(c)
            .map(|v| if archive.info.log_response { v.ln() } else { v })
            .collect::<Vec<f64>>()
    });
    let mut header = vec!["row", "prediction"];
    if observed.is_some() {
        header.push("observed");
    }
    let mut out = CsvOut::create(&a.out, &header)?;
    for (i, &z) in pred.iter().enumerate() {
        let mut rec = vec![i.to_string(), fmt_f64(to_response(z))];
        if let Some(obs) = &observed {
            rec.push(fmt_f64(obs[i]));
        }
        out.row(rec)?;
    }
    out.finish()?;

    if let (Some(grid), Some(path)) = (grid, &a.density_out) {
        // Densities of the normalised response, mapped through the
        // Jacobian of the z-score transform.
        let (mean, sd) = norm.map_or((0.0, 1.0), |ns| (ns.response.mean, ns.response.sd));
        let root = RngStream::new(a.seed);
        let rows: Vec<Vec<f64>> = (0..x.nrows()).map(|i| x.row(i).iter().copied().collect()).collect();
        let dens = par::try_map_range(rows.len(), |i| {
            let f = PredictiveDensity::new(&rows[i], &archive.draws, &hyper, a.mc_draws, &mut root.substream(i as u64))?;
            Ok(grid.iter().map(|&y| f.density((y - mean) / sd) / sd).collect::<Vec<f64>>())
        })?;
        let mut out = CsvOut::create(path, &["row", "y", "density"])?;
        for (i, d) in dens.iter().enumerate() {
            for (y, v) in grid.iter().zip(d) {
                out.row([i.to_string(), fmt_f64(*y), fmt_f64(*v)])?;
            }
        }
        out.finish()?;
    }
    log::info!("wrote {} predictions to {}", pred.len(), a.out.display());
    Ok(())
}

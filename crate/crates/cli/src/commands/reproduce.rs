use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::Args;
use dpmreg::experiment::{mean_and_se, replication_seed, run_replication, Condition, FitSettings, Method, ReplicationMetrics};
use dpmreg::model::Hyperparams;
use dpmreg::par;

use super::{parse_methods, usage, MethodList};
use crate::error::CliResult;
use crate::io::{fmt_f64, CsvOut};

/// `n,p,J` triple.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditionArg(pub Condition);

impl FromStr for ConditionArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let v: Vec<usize> = s
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| format!("condition must be 'n,p,J', got '{s}'"))?;
        match v[..] {
            [n, p, j] => Ok(ConditionArg(Condition { n, p, j })),
            _ => Err(format!("condition must be 'n,p,J', got '{s}'")),
        }
    }
}

#[derive(Clone, Debug, Args)]
pub struct ReproduceArgs {
    /// Condition "n,p,J"; repeat the flag for several.
    #[arg(long = "condition", required = true)]
    pub conditions: Vec<ConditionArg>,
    #[arg(long, default_value = "hs", value_parser = parse_methods)]
    pub baselines: MethodList,
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
    #[arg(long, default_value_t = 5000)]
    pub iterations: usize,
    #[arg(long, default_value_t = 2000)]
    pub burn_in: usize,
    #[arg(long, default_value_t = 100)]
    pub n_test: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Stop starting new replications after this many seconds; unfinished
    /// cells are marked incomplete.
    #[arg(long)]
    pub budget_seconds: Option<f64>,
    /// Summary CSV: mean and standard error per (condition, baseline).
    #[arg(long)]
    pub out: PathBuf,
    /// Optional CSV with one row per replication.
    #[arg(long)]
    pub per_rep: Option<PathBuf>,
}

const METRICS: [&str; 6] = ["l1", "l2", "ari", "j_hat", "ase", "a_auc"];

fn values(m: &ReplicationMetrics) -> [f64; 6] {
    [m.l1, m.l2, m.ari, m.j_hat as f64, m.ase, m.a_auc]
}

pub fn run(a: &ReproduceArgs) -> CliResult<()> {
    if a.reps == 0 {
        return Err(usage("--reps must be at least 1"));
    }
    let settings = FitSettings {
        iterations: a.iterations,
        burn_in: a.burn_in,
        n_test: a.n_test,
        ..FitSettings::default()
    };
    settings.chain(Method::HsDpm, 0).validate()?;
    let hyper = Hyperparams::default();
    let methods = &a.baselines.0;
    let jobs: Vec<(Condition, Method, usize)> = a
        .conditions
        .iter()
        .flat_map(|c| methods.iter().flat_map(move |&m| (0..a.reps).map(move |r| (c.0, m, r))))
        .collect();
    let start = Instant::now();
    let results = par::try_map_range(jobs.len(), |t| {
        let (cond, m, rep) = jobs[t];
        if a.budget_seconds.is_some_and(|b| start.elapsed().as_secs_f64() > b) {
            return Ok(None);
        }
        log::info!("n={} p={} J={} {} rep {rep}", cond.n, cond.p, cond.j, m.tag());
        let seed = replication_seed(a.seed, &cond, rep);
        run_replication(&cond, m, &hyper, &settings, seed).map(Some)
    })?;

    let mut header = vec!["n", "p", "J", "baseline", "reps_done", "reps_requested", "complete"];
    let stat_names: Vec<String> = METRICS.iter().flat_map(|m| [format!("{m}_mean"), format!("{m}_se")]).collect();
    header.extend(stat_names.iter().map(String::as_str));
    let mut out = CsvOut::create(&a.out, &header)?;
    for c in &a.conditions {
        for &m in methods {
            let done: Vec<&ReplicationMetrics> = jobs
                .iter()
                .zip(&results)
                .filter(|(j, _)| j.0 == c.0 && j.1 == m)
                .filter_map(|(_, r)| r.as_ref())
                .collect();
            let mut rec = vec![
                c.0.n.to_string(),
                c.0.p.to_string(),
                c.0.j.to_string(),
                m.tag().to_string(),
                done.len().to_string(),
                a.reps.to_string(),
                (done.len() == a.reps).to_string(),
            ];
            for k in 0..METRICS.len() {
                let v: Vec<f64> = done.iter().map(|r| values(r)[k]).collect();
                let (mean, se) = mean_and_se(&v);
                rec.push(fmt_f64(mean));
                rec.push(fmt_f64(se));
            }
            out.row(rec)?;
        }
    }
    out.finish()?;

    if let Some(path) = &a.per_rep {
        let mut header = vec!["n", "p", "J", "baseline", "rep"];
        header.extend(METRICS);
        let mut out = CsvOut::create(path, &header)?;
        for (j, r) in jobs.iter().zip(&results) {
            if let Some(r) = r {
                let mut rec = vec![j.0.n.to_string(), j.0.p.to_string(), j.0.j.to_string(), j.1.tag().to_string(), j.2.to_string()];
                rec.extend(values(r).iter().map(|&v| fmt_f64(v)));
                out.row(rec)?;
            }
        }
        out.finish()?;
    }
    Ok(())
}

//! Criterion 9: every command run twice with the same seed writes
//! byte-identical files. The second run uses a different worker count.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;

use sha2::{Digest, Sha256};

use crate::common::Check;

fn dpmreg(dir: &Path, threads: &str, args: &[&str]) {
    let status = Command::new(env!("CARGO_BIN_EXE_dpmreg"))
        .current_dir(dir)
        .env("DPMREG_THREADS", threads)
        .args(args)
        .status()
        .expect("spawn dpmreg");
    assert!(status.success(), "dpmreg {args:?} failed with {status}");
}

/// Runs the whole pipeline in `dir` and returns the digest of every output.
fn pipeline(dir: &Path, threads: &str) -> BTreeMap<String, String> {
    let chain = ["--iterations", "300", "--burn-in", "100", "--seed", "11"];
    dpmreg(dir, threads, &["simulate", "--n", "60", "--p", "6", "--J", "2", "--n-test", "30", "--seed", "5", "--out-dir", "sim"]);
    for method in ["hs", "ng", "n", "hs-linear"] {
        let archive = format!("fit-{method}.bin");
        let trace = format!("trace-{method}.csv");
        let mut args = vec!["fit", "--data", "sim/train.csv", "--baseline", method, "--out", &archive, "--trace", &trace];
        args.extend(chain);
        dpmreg(dir, threads, &args);
        let pred = format!("pred-{method}.csv");
        let dens = format!("dens-{method}.csv");
        dpmreg(dir, threads, &[
            "predict", "--archive", &archive, "--data", "sim/test.csv", "--out", &pred,
            "--density-grid", "-3,3,25", "--density-out", &dens, "--mc-draws", "32",
        ]);
    }
    dpmreg(dir, threads, &["report", "--archive", "fit-hs.bin", "--out-dir", "report", "--truth", "sim/truth.json"]);
    let mut args = vec!["cv", "--data", "sim/train.csv", "--baselines", "hs,ng", "--folds", "3", "--out", "cv.csv"];
    args.extend(["--iterations", "150", "--burn-in", "50", "--seed", "3"]);
    dpmreg(dir, threads, &args);
    dpmreg(dir, threads, &[
        "reproduce-table1", "--condition", "40,5,2", "--baselines", "hs,n", "--reps", "2",
        "--iterations", "150", "--burn-in", "50", "--n-test", "20", "--out", "table.csv", "--per-rep", "reps.csv",
    ]);
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let digest = Sha256::digest(std::fs::read(&path).unwrap());
                let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
                out.insert(path.strip_prefix(dir).unwrap().display().to_string(), hex);
            }
        }
    }
    out
}

pub fn run() -> Vec<Check> {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ha = pipeline(a.path(), "1");
    let hb = pipeline(b.path(), "4");
    let mut checks = vec![Check::at_least("output files produced", ha.len() as f64, 19.0)];
    let differing: Vec<&String> = ha.keys().filter(|k| hb.get(*k) != ha.get(*k)).collect();
    for k in &differing {
        eprintln!("    differs: {k}");
    }
    checks.push(Check::flag("same file set in both runs", ha.keys().eq(hb.keys())));
    checks.push(Check::at_most("files whose SHA-256 differs between runs", differing.len() as f64, 0.0));
    checks
}

//! Criterion 6: the greedy VI search against exhaustive enumeration.

use dpmreg::dist::RngStream;
use dpmreg::model::Partition;
use dpmreg::postprocess::greedy_vi_estimate;

use crate::common::Check;

/// Every set partition of n items as a restricted growth string.
fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut a = vec![0usize; n];
    fn rec(i: usize, max: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == a.len() {
            out.push(a.clone());
            return;
        }
        for v in 0..=max + 1 {
            a[i] = v;
            rec(i + 1, max.max(v), a, out);
        }
    }
    if n > 0 {
        rec(1, 0, &mut a, &mut out);
    }
    out
}

/// VI from the contingency table, written independently of the library.
fn vi(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len() as f64;
    let ka = a.iter().max().unwrap() + 1;
    let kb = b.iter().max().unwrap() + 1;
    let mut joint = vec![vec![0.0; kb]; ka];
    for (&x, &y) in a.iter().zip(b) {
        joint[x][y] += 1.0;
    }
    let ra: Vec<f64> = joint.iter().map(|r| r.iter().sum()).collect();
    let cb: Vec<f64> = (0..kb).map(|j| joint.iter().map(|r| r[j]).sum()).collect();
    let mut v = 0.0;
    for i in 0..ka {
        for j in 0..kb {
            let nij = joint[i][j];
            if nij > 0.0 {
                // H(a|b) + H(b|a)
                v += nij / n * ((ra[i] / nij).ln() + (cb[j] / nij).ln());
            }
        }
    }
    v
}

pub fn run() -> Vec<Check> {
    let trials = 100;
    let mut rng = RngStream::new(606);
    let mut failures = 0;
    let mut worst_gap = 0.0f64;
    for t in 0..trials {
        let n = 2 + rng.index(7);
        let s = 1 + rng.index(5);
        let samples: Vec<Vec<usize>> = (0..s)
            .map(|_| {
                let k = 1 + rng.index(n);
                (0..n).map(|_| rng.index(k)).collect()
            })
            .collect();
        let loss = |c: &[usize]| samples.iter().map(|x| vi(c, x)).sum::<f64>() / s as f64;
        let best = all_partitions(n).iter().map(|c| loss(c)).fold(f64::INFINITY, f64::min);
        let parts: Vec<Partition> = samples.iter().map(|x| Partition::from_labels(x)).collect();
        let est = greedy_vi_estimate(&parts, n, 50, &mut RngStream::new(1000 + t)).unwrap();
        let got = loss(est.partition.labels());
        let gap = got - best;
        worst_gap = worst_gap.max(gap);
        if gap > 1e-9 || (est.mean_vi_loss - got).abs() > 1e-9 {
            failures += 1;
        }
    }
    vec![
        Check::at_most("instances where greedy VI misses the exhaustive optimum", failures as f64, 0.0),
        Check::at_most("largest loss gap to the optimum", worst_gap, 1e-9),
        Check::within("Bell number B(8) from the enumeration", all_partitions(8).len() as f64, 4140.0, 0.0),
    ]
}

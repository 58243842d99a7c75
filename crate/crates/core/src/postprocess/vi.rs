use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::metrics::vi_distance;
use crate::dist::RngStream;
use crate::error::{check_same_len, Error, Result};
use crate::model::Partition;

/// At most this many distinct sampled partitions are scored as candidate
/// starting points (the most frequent ones).
const MAX_SCORED_STARTS: usize = 1000;
/// The most frequent distinct samples are also used as starting points.
const FREQUENT_STARTS: usize = 20;
const TOL: f64 = 1e-12;
/// Restarts from random perturbations of the incumbent.
const PERTURBATIONS: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterEstimate {
    pub partition: Partition,
    pub k: usize,
    pub mean_vi_loss: f64,
}

/// (1/S) Σₛ VI(candidate, sampleₛ)
pub fn mean_vi_loss(candidate: &Partition, samples: &[Partition]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Data("no sampled partitions".into()));
    }
    let mut total = 0.0;
    for s in samples {
        total += vi_distance(candidate, s)?;
    }
    Ok(total / samples.len() as f64)
}

/// Distinct partitions with their multiplicities, most frequent first; ties
/// keep first-seen order.
fn distinct(samples: &[Partition]) -> Vec<(Partition, f64)> {
    let mut index: HashMap<&Partition, usize> = HashMap::new();
    let mut out: Vec<(Partition, f64)> = Vec::new();
    for s in samples {
        match index.get(s) {
            Some(&k) => out[k].1 += 1.0,
            None => {
                index.insert(s, out.len());
                out.push((s.clone(), 1.0));
            }
        }
    }
    out.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    out
}

/// Incremental form of the weighted VI loss: with cluster sizes c and
/// per-sample joint counts nₛ, n·W·loss = W Σ f(c) + Σₛ wₛ Σ f(bₛ)
/// − 2 Σₛ wₛ Σ f(nₛ) where f(x) = x ln x.
struct Greedy<'a> {
    samples: &'a [(Partition, f64)],
    total_w: f64,
    xlnx: Vec<f64>,
    labels: Vec<usize>,
    sizes: Vec<usize>,
    /// joint[s][slot * kₛ + j]
    joint: Vec<Vec<usize>>,
}

impl<'a> Greedy<'a> {
    fn new(samples: &'a [(Partition, f64)], start: &[usize], slots: usize) -> Self {
        let n = start.len();
        let xlnx = (0..=n).map(|x| if x == 0 { 0.0 } else { x as f64 * (x as f64).ln() }).collect();
        let mut sizes = vec![0; slots];
        for &l in start {
            sizes[l] += 1;
        }
        let joint = samples
            .iter()
            .map(|(p, _)| {
                let k = p.n_clusters();
                let mut t = vec![0; slots * k];
                for (i, &j) in p.labels().iter().enumerate() {
                    t[start[i] * k + j] += 1;
                }
                t
            })
            .collect();
        let total_w = samples.iter().map(|s| s.1).sum();
        Self { samples, total_w, xlnx, labels: start.to_vec(), sizes, joint }
    }

    fn move_delta(&self, i: usize, to: usize) -> f64 {
        let from = self.labels[i];
        if to == from {
            return 0.0;
        }
        let f = &self.xlnx;
        let (cf, ct) = (self.sizes[from], self.sizes[to]);
        let mut d = self.total_w * (f[cf - 1] - f[cf] + f[ct + 1] - f[ct]);
        for (s, (p, w)) in self.samples.iter().enumerate() {
            let k = p.n_clusters();
            let j = p.labels()[i];
            let (a, b) = (self.joint[s][from * k + j], self.joint[s][to * k + j]);
            d -= 2.0 * w * (f[a - 1] - f[a] + f[b + 1] - f[b]);
        }
        d
    }

    fn apply_move(&mut self, i: usize, to: usize) {
        let from = self.labels[i];
        self.sizes[from] -= 1;
        self.sizes[to] += 1;
        for (s, (p, _)) in self.samples.iter().enumerate() {
            let k = p.n_clusters();
            let j = p.labels()[i];
            self.joint[s][from * k + j] -= 1;
            self.joint[s][to * k + j] += 1;
        }
        self.labels[i] = to;
    }

    fn merge_delta(&self, a: usize, b: usize) -> f64 {
        let f = &self.xlnx;
        let (ca, cb) = (self.sizes[a], self.sizes[b]);
        let mut d = self.total_w * (f[ca + cb] - f[ca] - f[cb]);
        for (s, (p, w)) in self.samples.iter().enumerate() {
            let k = p.n_clusters();
            let t = &self.joint[s];
            let mut acc = 0.0;
            for j in 0..k {
                let (x, y) = (t[a * k + j], t[b * k + j]);
                if x > 0 && y > 0 {
                    acc += f[x + y] - f[x] - f[y];
                }
            }
            d -= 2.0 * w * acc;
        }
        d
    }

    fn apply_merge(&mut self, into: usize, from: usize) {
        for i in 0..self.labels.len() {
            if self.labels[i] == from {
                self.apply_move(i, into);
            }
        }
    }

    /// Single-observation moves in random order until a sweep changes nothing.
    fn sweep_moves(&mut self, max_sweeps: usize, rng: &mut RngStream) -> bool {
        let n = self.labels.len();
        let mut improved = false;
        for _ in 0..max_sweeps {
            let mut order: Vec<usize> = (0..n).collect();
            for k in (1..n).rev() {
                order.swap(k, rng.index(k + 1));
            }
            let mut moved = false;
            for &i in &order {
                let from = self.labels[i];
                let empty = (0..self.sizes.len()).find(|&s| self.sizes[s] == 0);
                let mut best = (0.0, from);
                for to in 0..self.sizes.len() {
                    if to == from || (self.sizes[to] == 0 && Some(to) != empty) {
                        continue;
                    }
                    if self.sizes[from] == 1 && self.sizes[to] == 0 {
                        continue;
                    }
                    let d = self.move_delta(i, to);
                    if d < best.0 - TOL {
                        best = (d, to);
                    }
                }
                if best.1 != from {
                    self.apply_move(i, best.1);
                    moved = true;
                }
            }
            if !moved {
                break;
            }
            improved = true;
        }
        improved
    }

    fn best_merge(&self) -> Option<(usize, usize)> {
        let occupied: Vec<usize> = (0..self.sizes.len()).filter(|&s| self.sizes[s] > 0).collect();
        let mut best = (-TOL, None);
        for (x, &a) in occupied.iter().enumerate() {
            for &b in &occupied[x + 1..] {
                let d = self.merge_delta(a, b);
                if d < best.0 {
                    best = (d, Some((a, b)));
                }
            }
        }
        best.1
    }

    fn run(&mut self, max_sweeps: usize, rng: &mut RngStream) {
        loop {
            self.sweep_moves(max_sweeps, rng);
            match self.best_merge() {
                Some((a, b)) => self.apply_merge(a, b),
                None => break,
            }
        }
    }
}

/// Approximate minimiser of the posterior expected VI loss.
///
/// Local search (single-row reassignments in random order, to any existing
/// cluster or a fresh one while fewer than `max_k` are in use, alternating
/// with the best improving merge of two clusters) is started from the last
/// sample, from the sampled partition with the lowest expected loss, from the
/// most frequent sampled partitions and from the one-cluster and all-singleton
/// partitions; the best end point is then refined by restarting from random
/// perturbations of it (a fifth of the rows reassigned).
pub fn greedy_vi_estimate(
    samples: &[Partition],
    max_k: usize,
    sweeps: usize,
    rng: &mut RngStream,
) -> Result<ClusterEstimate> {
    let last = samples.last().ok_or_else(|| Error::Data("no sampled partitions".into()))?;
    let n = last.len();
    for s in samples {
        check_same_len(n, s.len())?;
    }
    let max_k = max_k.clamp(1, n.max(1));
    let uniq = distinct(samples);
    let total_w = samples.len() as f64;
    let weighted_loss = |c: &Partition| -> Result<f64> {
        let mut t = 0.0;
        for (p, w) in &uniq {
            t += w * vi_distance(c, p)?;
        }
        Ok(t / total_w)
    };

    let mut starts: Vec<Partition> = vec![last.clone()];
    let mut best_sample = (f64::INFINITY, None);
    for (p, _) in uniq.iter().take(MAX_SCORED_STARTS) {
        let l = weighted_loss(p)?;
        if l < best_sample.0 {
            best_sample = (l, Some(p.clone()));
        }
    }
    if let Some(p) = best_sample.1 {
        starts.push(p);
    }
    starts.extend(uniq.iter().take(FREQUENT_STARTS).map(|(p, _)| p.clone()));
    starts.push(Partition::from_labels(&vec![0; n]));
    starts.push(Partition::from_labels(&(0..n).collect::<Vec<_>>()));
    let mut seen = std::collections::HashSet::new();
    starts.retain(|p| seen.insert(p.clone()));

    let mut best: Option<(f64, Partition)> = None;
    for start in starts {
        let labels = capped(start.labels(), max_k);
        let slots = max_k.max(labels.iter().max().map_or(0, |m| m + 1));
        let mut g = Greedy::new(&uniq, &labels, slots);
        g.run(sweeps, rng);
        let p = Partition::from_labels(&g.labels);
        let l = weighted_loss(&p)?;
        if best.as_ref().is_none_or(|(bl, _)| l < *bl - TOL) {
            best = Some((l, p));
        }
    }
    let (mut best_loss, mut best_p) = best.expect("at least one start");
    for _ in 0..PERTURBATIONS {
        let k = best_p.n_clusters();
        let slots = max_k.max(k);
        let labels: Vec<usize> = best_p
            .labels()
            .iter()
            .map(|&l| if rng.uniform() < 0.2 { rng.index((k + 1).min(slots)) } else { l })
            .collect();
        let mut g = Greedy::new(&uniq, &labels, slots);
        g.run(sweeps, rng);
        let p = Partition::from_labels(&g.labels);
        let l = weighted_loss(&p)?;
        if l < best_loss - TOL {
            best_loss = l;
            best_p = p;
        }
    }
    let (mean_vi_loss, partition) = (best_loss, best_p);
    Ok(ClusterEstimate { k: partition.n_clusters(), partition, mean_vi_loss })
}

/// Folds labels ≥ `max_k` into the last allowed cluster.
fn capped(labels: &[usize], max_k: usize) -> Vec<usize> {
    labels.iter().map(|&l| l.min(max_k - 1)).collect()
}

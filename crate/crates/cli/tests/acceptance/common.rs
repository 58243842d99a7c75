//! Shared helpers: KS statistics and grid-quadrature CDFs.

use statrs::distribution::{ContinuousCDF, Normal};

/// Outcome of one numeric check within a criterion.
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub pass: bool,
    /// How to read `value` against `limit`, e.g. "<" or "in".
    pub relation: String,
}

impl Check {
    pub fn below(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self { name: name.into(), value, limit, pass: value < limit, relation: "<".into() }
    }

    pub fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self { name: name.into(), value, limit, pass: value <= limit, relation: "<=".into() }
    }

    pub fn above(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self { name: name.into(), value, limit, pass: value > limit, relation: ">".into() }
    }

    pub fn at_least(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self { name: name.into(), value, limit, pass: value >= limit, relation: ">=".into() }
    }

    pub fn within(name: impl Into<String>, value: f64, target: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            value,
            limit: target,
            pass: (value - target).abs() <= tol,
            relation: format!("within {tol:e} of"),
        }
    }

    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Self { name: name.into(), value: ok as u8 as f64, limit: 1.0, pass: ok, relation: "==".into() }
    }

    pub fn describe(&self) -> String {
        format!(
            "{} {}: {:.6} {} {}",
            if self.pass { "ok  " } else { "FAIL" },
            self.name,
            self.value,
            self.relation,
            self.limit
        )
    }
}

/// Piecewise-linear CDF tabulated on a grid.
pub struct GridCdf {
    xs: Vec<f64>,
    cdf: Vec<f64>,
}

impl GridCdf {
    /// CDF of a density on (0, ∞) given its unnormalised log, integrated by
    /// the trapezoid rule on a grid uniform in ln x over [lo, hi].
    pub fn positive(log_density: impl Fn(f64) -> f64, lo: f64, hi: f64, points: usize) -> Self {
        let (a, b) = (lo.ln(), hi.ln());
        let us: Vec<f64> = (0..points).map(|k| a + (b - a) * k as f64 / (points - 1) as f64).collect();
        let xs: Vec<f64> = us.iter().map(|u| u.exp()).collect();
        // density of u = ln x is f(x)·x
        let logs: Vec<f64> = xs.iter().zip(&us).map(|(&x, &u)| log_density(x) + u).collect();
        Self::from_logs(xs, &us, logs)
    }

    /// CDF of a density on the real line over [lo, hi].
    pub fn real(log_density: impl Fn(f64) -> f64, lo: f64, hi: f64, points: usize) -> Self {
        let xs: Vec<f64> = (0..points).map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64).collect();
        let logs: Vec<f64> = xs.iter().map(|&x| log_density(x)).collect();
        let grid = xs.clone();
        Self::from_logs(xs, &grid, logs)
    }

    /// Unnormalised density values at `xs`, integrated over the matching
    /// points of `grid` (which may be a transform of `xs`, such as ln x).
    pub fn tabulated(xs: Vec<f64>, grid: &[f64], density: &[f64]) -> Self {
        let logs: Vec<f64> = density.iter().map(|d| d.ln()).collect();
        Self::from_logs(xs, grid, logs)
    }

    fn from_logs(xs: Vec<f64>, grid: &[f64], logs: Vec<f64>) -> Self {
        let top = logs.iter().cloned().filter(|v| v.is_finite()).fold(f64::NEG_INFINITY, f64::max);
        let f: Vec<f64> = logs.iter().map(|l| if l.is_finite() { (l - top).exp() } else { 0.0 }).collect();
        let mut cdf = vec![0.0; xs.len()];
        for k in 1..xs.len() {
            cdf[k] = cdf[k - 1] + 0.5 * (f[k] + f[k - 1]) * (grid[k] - grid[k - 1]);
        }
        let total = *cdf.last().unwrap();
        cdf.iter_mut().for_each(|c| *c /= total);
        Self { xs, cdf }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.xs[0] {
            return 0.0;
        }
        if x >= *self.xs.last().unwrap() {
            return 1.0;
        }
        let k = self.xs.partition_point(|&g| g <= x);
        let (x0, x1) = (self.xs[k - 1], self.xs[k]);
        let t = (x - x0) / (x1 - x0);
        self.cdf[k - 1] + t * (self.cdf[k] - self.cdf[k - 1])
    }
}

/// One-sample Kolmogorov–Smirnov statistic.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut s = samples.to_vec();
    s.sort_by(|a, b| a.total_cmp(b));
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Two-sample Kolmogorov–Smirnov statistic.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| x.total_cmp(y));
    b.sort_by(|x, y| x.total_cmp(y));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Largest CDF gap between observed category counts and target probabilities.
pub fn ks_discrete(counts: &[usize], probs: &[f64]) -> f64 {
    let n: usize = counts.iter().sum();
    let (mut ce, mut cp, mut d) = (0.0, 0.0, 0.0f64);
    for (c, p) in counts.iter().zip(probs) {
        ce += *c as f64 / n as f64;
        cp += p;
        d = d.max((ce - cp).abs());
    }
    d
}

pub fn normal_cdf(mean: f64, var: f64) -> impl Fn(f64) -> f64 {
    let dist = Normal::new(mean, var.sqrt()).unwrap();
    move |x| dist.cdf(x)
}

pub fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    (m, xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0))
}

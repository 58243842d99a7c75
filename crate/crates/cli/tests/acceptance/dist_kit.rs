//! Criterion 5: generator moments, limits and the slice sampler.

use dpmreg::dist::{
    log_student_t_pdf, sample_beta, sample_chi_squared, sample_exponential, sample_gamma, sample_gig,
    sample_inverse_gamma, sample_mvn_from_precision_system, sample_normal, sample_wishart, slice_sample_step,
    GigParams, RngStream, DEFAULT_MAX_STEPS, DEFAULT_WIDTH,
};
use nalgebra::{DMatrix, DVector};
use statrs::distribution::{Beta, Continuous, ContinuousCDF, Exp, Gamma, Normal};
use statrs::function::gamma::ln_gamma;

use crate::common::{ks_statistic, ks_two_sample, mean_var, Check, GridCdf};

const N: usize = 100_000;

fn sample(mut f: impl FnMut(&mut RngStream) -> f64, seed: u64, n: usize) -> Vec<f64> {
    let mut r = RngStream::new(seed);
    (0..n).map(|_| f(&mut r)).collect()
}

/// Mean and variance against analytic values within four Monte Carlo
/// standard errors (the variance's error uses the empirical fourth moment).
fn moments(name: &str, xs: &[f64], mean: f64, var: Option<f64>) -> Vec<Check> {
    let n = xs.len() as f64;
    let (m, v) = mean_var(xs);
    let mut out = vec![Check::within(format!("{name} mean"), m, mean, 4.0 * (v / n).sqrt())];
    if let Some(var) = var {
        let m4 = xs.iter().map(|x| (x - m).powi(4)).sum::<f64>() / n;
        out.push(Check::within(format!("{name} variance"), v, var, 4.0 * ((m4 - v * v) / n).sqrt()));
    }
    out
}

fn quantile(xs: &[f64], q: f64) -> f64 {
    let mut s = xs.to_vec();
    s.sort_by(|a, b| a.total_cmp(b));
    s[((s.len() as f64 - 1.0) * q).round() as usize]
}

/// E[X] under the GIG kernel x^(h−1) exp(−(cx + d/x)/2), log-grid trapezoid.
fn gig_quadrature_mean(h: f64, c: f64, d: f64) -> f64 {
    let k = 400_000;
    let (lo, hi) = ((1e-12f64).ln(), (1e8f64).ln());
    let step = (hi - lo) / k as f64;
    let (mut z, mut m) = (0.0, 0.0);
    for t in 0..=k {
        let x = (lo + t as f64 * step).exp();
        let w = if t == 0 || t == k { 0.5 } else { 1.0 };
        let f = ((h - 1.0) * x.ln() - 0.5 * (c * x + d / x)).exp() * x * w;
        z += f;
        m += f * x;
    }
    m / z
}

fn univariate() -> Vec<Check> {
    let mut out = Vec::new();
    let s = sample(|r| sample_normal(0.0, 1.0, r).unwrap(), 1, 1_000_000);
    out.extend(moments("normal(0,1)", &s, 0.0, Some(1.0)));
    let s = sample(|r| sample_normal(2.0, 4.0, r).unwrap(), 2, N);
    out.extend(moments("normal(2,4)", &s, 2.0, Some(4.0)));
    out.push(Check::within("normal(2,4) 97.5% quantile", quantile(&s, 0.975), 2.0 + 1.959964 * 2.0, 0.05));
    out.push(Check::flag("normal rejects zero variance", sample_normal(5.0, 0.0, &mut RngStream::new(0)).is_err()));

    let s = sample(|r| sample_gamma(2.0, 3.0, r).unwrap(), 3, N);
    out.extend(moments("gamma(2, scale 3)", &s, 6.0, Some(18.0)));
    let s = sample(|r| sample_gamma(0.5, 2.0, r).unwrap(), 4, N);
    out.extend(moments("gamma(0.5, scale 2)", &s, 1.0, Some(2.0)));
    let s = sample(|r| sample_gamma(1.0, 1.0, r).unwrap(), 5, N);
    let tail = s.iter().filter(|&&x| x > 1.0).count() as f64 / N as f64;
    out.push(Check::within("gamma(1,1) P(X > 1)", tail, (-1.0f64).exp(), 0.01));

    let s = sample(|r| sample_inverse_gamma(3.0, 4.0, r).unwrap(), 6, N);
    out.extend(moments("inverse-gamma(3, 4)", &s, 2.0, None));
    let s = sample(|r| sample_inverse_gamma(6.0, 4.0, r).unwrap(), 7, N);
    out.extend(moments("inverse-gamma(6, 4)", &s, 0.8, Some(16.0 / (25.0 * 4.0))));
    let s = sample(|r| 1.0 / sample_inverse_gamma(2.0, 5.0, r).unwrap(), 8, N);
    out.push(Check::within("1/inverse-gamma(2, 5) mean", mean_var(&s).0, 0.4, 0.01));
    let s = sample(|r| sample_inverse_gamma(0.5, 1.0, r).unwrap(), 9, 1_000_000);
    // median of IG(1/2, 1) from quadrature of its log density
    let cdf = GridCdf::positive(|x| -1.5 * x.ln() - 1.0 / x, 1e-6, 1e10, 400_001);
    let (mut lo, mut hi): (f64, f64) = (1e-6, 1e10);
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if cdf.eval(mid) < 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let med = quantile(&s, 0.5);
    out.push(Check::below("inverse-gamma(0.5, 1) median relative error", (med / lo - 1.0).abs(), 0.01));

    let s = sample(|r| sample_beta(1.0, 1.0, r).unwrap(), 10, N);
    out.extend(moments("beta(1,1)", &s, 0.5, Some(1.0 / 12.0)));
    let s = sample(|r| sample_beta(1.0, 4.0, r).unwrap(), 11, N);
    out.extend(moments("beta(1,4)", &s, 0.2, Some(4.0 / (25.0 * 6.0))));
    let s = sample(|r| sample_beta(2.0, 3.0, r).unwrap(), 12, N);
    let h = 0.02;
    let near = s.iter().filter(|&&x| (x - 0.5).abs() < h / 2.0).count() as f64 / (N as f64 * h);
    let target = Beta::new(2.0, 3.0).unwrap().pdf(0.5);
    out.push(Check::below("beta(2,3) histogram density at 0.5, relative error", (near / target - 1.0).abs(), 0.05));

    let s = sample(|r| sample_exponential(2.0, r).unwrap(), 13, N);
    out.extend(moments("exponential(rate 2)", &s, 0.5, Some(0.25)));
    let s = sample(|r| sample_chi_squared(5.0, r).unwrap(), 14, N);
    out.extend(moments("chi-squared(5)", &s, 5.0, Some(10.0)));
    out
}

fn wishart() -> Vec<Check> {
    let mut out = Vec::new();
    for (name, df, v, tol) in [
        ("wishart(5, I2)", 5.0, DMatrix::identity(2, 2), 0.1),
        ("wishart(4, [[2,1],[1,2]])", 4.0, DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]), 0.4),
    ] {
        let mut r = RngStream::new(21);
        let n = 10_000;
        let mut mean = DMatrix::zeros(2, 2);
        for _ in 0..n {
            mean += sample_wishart(df, &v, &mut r).unwrap();
        }
        mean /= n as f64;
        let err = (mean - &v * df).amax();
        out.push(Check::below(format!("{name} entrywise mean error"), err, tol));
    }
    let mut r = RngStream::new(22);
    let s: Vec<f64> = (0..N).map(|_| sample_wishart(3.0, &DMatrix::from_element(1, 1, 0.5), &mut r).unwrap()[(0, 0)]).collect();
    out.extend(moments("wishart 1-d (k=3, v=0.5)", &s, 1.5, Some(2.0 * 3.0 * 0.25)));
    out
}

fn gig() -> Vec<Check> {
    let mut out = Vec::new();
    let draw = |h: f64, c: f64, d: f64, seed: u64| {
        let p = GigParams::new(h, c, d).unwrap();
        sample(|r| sample_gig(p, r), seed, N)
    };
    let s = draw(-0.5, 4.0, 1.0, 31);
    out.push(Check::within("GIG(-1/2, 4, 1) mean", mean_var(&s).0, 0.5, 0.01));
    for (i, (h, c, d)) in [(1.0, 2.0, 2.0), (0.3, 0.5, 0.05), (-2.5, 1.0, 4.0), (0.7, 1e-3, 3.0), (5.0, 2.0, 0.5)]
        .into_iter()
        .enumerate()
    {
        let s = draw(h, c, d, 32 + i as u64);
        let q = gig_quadrature_mean(h, c, d);
        out.push(Check::below(format!("GIG({h}, {c}, {d}) mean vs quadrature, relative"), (mean_var(&s).0 / q - 1.0).abs(), 0.01));
    }
    let s = draw(3.0, 2.0, 1e-12, 40);
    out.push(Check::within("GIG(3, 2, 1e-12) mean (Gamma limit)", mean_var(&s).0, 3.0, 0.05));

    // limits as two-sample KS against the limiting generators
    let g = draw(2.0, 1.5, 1e-10, 41);
    let gamma = sample(|r| sample_gamma(2.0, 2.0 / 1.5, r).unwrap(), 42, N);
    out.push(Check::below("KS GIG(2, 1.5, d->0) vs Gamma(2, scale 2/c)", ks_two_sample(&g, &gamma), 0.02));
    let g = draw(-1.5, 1e-10, 2.0, 43);
    let ig = sample(|r| sample_inverse_gamma(1.5, 1.0, r).unwrap(), 44, N);
    out.push(Check::below("KS GIG(-1.5, c->0, 2) vs IG(1.5, d/2)", ks_two_sample(&g, &ig), 0.02));
    out
}

fn slice() -> Vec<Check> {
    let mut out = Vec::new();
    let chain = |f: &dyn Fn(f64) -> f64, x0: f64, seed: u64| {
        let mut r = RngStream::new(seed);
        let mut x = x0;
        (0..N)
            .map(|_| {
                x = slice_sample_step(f, x, DEFAULT_WIDTH, DEFAULT_MAX_STEPS, &mut r).unwrap();
                x
            })
            .collect::<Vec<f64>>()
    };
    let normal = Normal::new(0.0, 1.0).unwrap();
    let s = chain(&|x| -0.5 * x * x, 0.0, 51);
    let (m, v) = mean_var(&s);
    out.push(Check::below("slice N(0,1) |mean|", m.abs(), 0.02));
    out.push(Check::within("slice N(0,1) variance", v, 1.0, 0.03));
    out.push(Check::below("KS slice N(0,1)", ks_statistic(&s, |x| normal.cdf(x)), 0.02));

    let exp = Exp::new(1.0).unwrap();
    let s = chain(&|x| if x > 0.0 { -x } else { f64::NEG_INFINITY }, 1.0, 52);
    out.push(Check::within("slice Exp(1) mean", mean_var(&s).0, 1.0, 0.02));
    out.push(Check::below("KS slice Exp(1)", ks_statistic(&s, |x| exp.cdf(x)), 0.02));

    let gamma = Gamma::new(3.0, 2.0).unwrap();
    let s = chain(&|x| if x > 0.0 { 2.0 * x.ln() - 2.0 * x } else { f64::NEG_INFINITY }, 1.0, 53);
    out.push(Check::below("KS slice Gamma(3, rate 2)", ks_statistic(&s, |x| gamma.cdf(x)), 0.02));

    let s = chain(&|x| if (0.0..=1.0).contains(&x) { 0.0 } else { f64::NEG_INFINITY }, 0.5, 54);
    out.push(Check::within("slice Uniform(0,1) mean", mean_var(&s).0, 0.5, 0.01));
    out
}

fn mvn() -> Vec<Check> {
    let mut out = Vec::new();
    for (dim, seed) in [(3usize, 61u64), (5, 62)] {
        let mut r = RngStream::new(seed);
        let g = DMatrix::from_fn(dim, dim, |_, _| sample_normal(0.0, 1.0, &mut r).unwrap());
        let a = &g * g.transpose() + DMatrix::identity(dim, dim) * 0.5;
        let b = DVector::from_fn(dim, |k, _| k as f64 - 1.0);
        let inv = a.clone().try_inverse().unwrap();
        let mean = &inv * &b;
        let xs: Vec<DVector<f64>> = (0..N).map(|_| sample_mvn_from_precision_system(&a, &b, 1.0, &mut r).unwrap()).collect();
        let emp_mean = xs.iter().fold(DVector::zeros(dim), |acc, x| acc + x) / N as f64;
        let emp_cov = xs.iter().fold(DMatrix::zeros(dim, dim), |acc, x| {
            let c = x - &emp_mean;
            acc + &c * c.transpose()
        }) / (N as f64 - 1.0);
        out.push(Check::below(format!("mvn dim {dim} mean error"), (emp_mean - mean).amax(), 0.05));
        out.push(Check::below(format!("mvn dim {dim} covariance Frobenius error"), (emp_cov - inv).norm(), 0.05));
    }
    let bad = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
    out.push(Check::flag(
        "mvn non-PD precision is a numerical error",
        sample_mvn_from_precision_system(&bad, &DVector::zeros(2), 1.0, &mut RngStream::new(0)).is_err(),
    ));
    out
}

fn student_t() -> Vec<Check> {
    let mut out = vec![
        Check::within("t df=1e6 at 0 vs normal", log_student_t_pdf(0.0, 1e6, 0.0, 1.0), -(2.0 * std::f64::consts::PI).sqrt().ln(), 1e-4),
        Check::within("t df=1 at 0 vs Cauchy", log_student_t_pdf(0.0, 1.0, 0.0, 1.0), (1.0 / std::f64::consts::PI).ln(), 1e-12),
    ];
    // t_4(1, 2) at 3 as a Normal–inverse-gamma mixture, integrated on a log grid
    let (df, loc, scale, x): (f64, f64, f64, f64) = (4.0, 1.0, 2.0, 3.0);
    let (a, b) = (df / 2.0, df * scale * scale / 2.0);
    let k = 200_000;
    let (lo, hi) = ((1e-6f64).ln(), (1e6f64).ln());
    let h = (hi - lo) / k as f64;
    let mut total = 0.0;
    for t in 0..=k {
        let v = (lo + t as f64 * h).exp();
        let ln_ig = a * b.ln() - ln_gamma(a) - (a + 1.0) * v.ln() - b / v;
        let ln_n = -0.5 * ((2.0 * std::f64::consts::PI * v).ln() + (x - loc).powi(2) / v);
        let f = (ln_ig + ln_n).exp() * v;
        total += if t == 0 || t == k { 0.5 * f } else { f };
    }
    out.push(Check::within("t_4(1, 2) at 3 vs mixture quadrature", log_student_t_pdf(x, df, loc, scale), (total * h).ln(), 1e-6));
    out
}

fn determinism() -> Vec<Check> {
    let run = || {
        let mut r = RngStream::new(99);
        let p = GigParams::new(0.4, 1.0, 2.0).unwrap();
        vec![
            sample_normal(0.0, 1.0, &mut r).unwrap(),
            sample_gamma(0.7, 1.0, &mut r).unwrap(),
            sample_inverse_gamma(2.0, 1.0, &mut r).unwrap(),
            sample_beta(0.5, 0.5, &mut r).unwrap(),
            sample_gig(p, &mut r),
            sample_wishart(3.0, &DMatrix::identity(2, 2), &mut r).unwrap()[(0, 1)],
        ]
    };
    let (a, b) = (run(), run());
    vec![Check::flag("equal seeds give bit-identical draws", a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()))]
}

pub fn run() -> Vec<Check> {
    let mut out = univariate();
    out.extend(wishart());
    out.extend(gig());
    out.extend(slice());
    out.extend(mvn());
    out.extend(student_t());
    out.extend(determinism());
    out
}

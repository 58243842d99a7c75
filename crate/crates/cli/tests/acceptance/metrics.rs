//! Criterion 7: hand-computed metric fixtures.

use dpmreg::dist::{sample_normal, RngStream};
use dpmreg::model::{Baseline, DrawnCluster, DrawsMeta, Partition, PosteriorDraw, PosteriorDraws};
use dpmreg::postprocess::{
    a_auc, adjusted_rand_index, auc, average_squared_error, prediction_errors, sn_select, vi_distance, ClusterEstimate,
};
use nalgebra::{DMatrix, DVector};

use crate::common::Check;

const EPS: f64 = 1e-12;

fn part(labels: &[usize]) -> Partition {
    Partition::from_labels(labels)
}

/// Single-cluster draws over `n` rows with the given slope vectors.
fn one_cluster_draws(n: usize, betas: Vec<DVector<f64>>) -> PosteriorDraws {
    let p = betas[0].len();
    let draws = betas
        .into_iter()
        .map(|beta| PosteriorDraw {
            partition: part(&vec![0; n]),
            clusters: vec![DrawnCluster { mu: 0.0, beta, m: DVector::zeros(p), tau: DVector::from_element(p, 1.0) }],
            sigma2: 1.0,
            alpha: 1.0,
        })
        .collect();
    PosteriorDraws {
        draws,
        meta: DrawsMeta {
            iterations: 0,
            burn_in: 0,
            thin: 1,
            seed: 0,
            baseline: Baseline::Horseshoe,
            single_cluster: true,
            ng_v: None,
            n,
            p,
            has_covariate_params: true,
        },
        trace: Vec::new(),
    }
}

pub fn run() -> Vec<Check> {
    let ln2 = std::f64::consts::LN_2;
    let mut out = vec![
        Check::within("VI({1,1}, {1,2}) = ln 2", vi_distance(&part(&[0, 0]), &part(&[0, 1])).unwrap(), ln2, EPS),
        Check::within("VI(a, a) = 0", vi_distance(&part(&[0, 1, 1, 2]), &part(&[5, 3, 3, 0])).unwrap(), 0.0, EPS),
        // entropies H(a) = ln 2, H(b) = ln 3 and I(a, b) = ln 2 for a coarsening
        Check::within(
            "VI of a coarsening = H(b) - H(a)",
            vi_distance(&part(&[0, 0, 1, 1, 2, 2]), &part(&[0, 0, 0, 0, 1, 1])).unwrap(),
            3f64.ln() - (2.0 / 3.0 * (1.5f64).ln() + 1.0 / 3.0 * 3f64.ln()),
            EPS,
        ),
        Check::within(
            "ARI(one cluster, singletons) = 0",
            adjusted_rand_index(&part(&[0, 0, 0, 0]), &part(&[0, 1, 2, 3])).unwrap(),
            0.0,
            EPS,
        ),
        Check::within("ARI(a, a) = 1", adjusted_rand_index(&part(&[0, 1, 1, 2, 0]), &part(&[0, 1, 1, 2, 0])).unwrap(), 1.0, EPS),
        Check::within(
            "ARI invariant to relabelling",
            adjusted_rand_index(&part(&[0, 0, 1, 1, 2]), &part(&[2, 2, 0, 0, 1])).unwrap(),
            1.0,
            EPS,
        ),
    ];
    // ARI from its pair-count formula for a = (0,0,0,1,1,1), b = (0,0,1,1,2,2):
    // table [[2,1,0],[0,1,2]], sum C(n_ij,2) = 2, rows 3+3, cols 1+1+1, C(6,2) = 15
    let expected = (2.0 - 6.0 * 3.0 / 15.0) / (0.5 * (6.0 + 3.0) - 6.0 * 3.0 / 15.0);
    out.push(Check::within(
        "ARI pair-count fixture",
        adjusted_rand_index(&part(&[0, 0, 0, 1, 1, 1]), &part(&[0, 0, 1, 1, 2, 2])).unwrap(),
        expected,
        EPS,
    ));

    let (l1, l2) = prediction_errors(&DVector::from_vec(vec![1.0, -1.0]), &DVector::zeros(2)).unwrap();
    out.push(Check::within("L1 of residuals (1, -1)", l1, 1.0, EPS));
    out.push(Check::within("L2 of residuals (1, -1)", l2, 1.0, EPS));
    let (l1, l2) = prediction_errors(&DVector::from_vec(vec![3.0, 0.0, 0.0]), &DVector::zeros(3)).unwrap();
    out.push(Check::within("L1 of residuals (3, 0, 0)", l1, 1.0, EPS));
    out.push(Check::within("L2 of residuals (3, 0, 0)", l2, 3.0, EPS));

    let ase = average_squared_error(&DMatrix::from_row_slice(1, 2, &[2.0, 0.0]), &DMatrix::from_row_slice(1, 2, &[1.0, -1.0]));
    out.push(Check::within("ASE with difference (1, 1)", ase.unwrap(), 1.0, EPS));

    let s = [0.9, 0.8, 0.3];
    out.push(Check::within("AUC perfect ranking", auc(&s, &[true, false, false]).unwrap(), 1.0, EPS));
    out.push(Check::within("AUC reversed ranking", auc(&s, &[false, false, true]).unwrap(), 0.0, EPS));
    out.push(Check::within("AUC all ties", auc(&[0.5; 4], &[true, false, true, false]).unwrap(), 0.5, EPS));
    out.push(Check::flag("AUC undefined with one class", auc(&s, &[true; 3]).is_none()));
    // exclusion probabilities are low exactly on the true nonzeros
    let p = DMatrix::from_row_slice(2, 2, &[0.1, 0.9, 0.2, 0.8]);
    let truth = DMatrix::from_row_slice(2, 2, &[true, false, true, false]);
    out.push(Check::within("A-AUC perfect separation", a_auc(&p, &truth).unwrap(), 1.0, EPS));

    // SN probability of standard normal draws is P(|Z| <= 1)
    let mut r = RngStream::new(7);
    let n = 100_000;
    let betas: Vec<DVector<f64>> = (0..n)
        .map(|_| DVector::from_vec(vec![sample_normal(0.0, 1.0, &mut r).unwrap(), 5.0 + sample_normal(0.0, 0.01, &mut r).unwrap()]))
        .collect();
    let draws = one_cluster_draws(3, betas);
    let est = ClusterEstimate { partition: part(&[0, 0, 0]), k: 1, mean_vi_loss: 0.0 };
    let sel = sn_select(&draws, &est, 0.5).unwrap();
    out.push(Check::within("SN probability of N(0,1) draws", sel.p[(0, 0)], 0.682_689_492, 0.005));
    out.push(Check::flag("SN excludes the null coefficient", !sel.selected[(0, 0)]));
    out.push(Check::flag("SN keeps the coefficient far from zero", sel.selected[(0, 1)] && sel.p[(1, 1)] == 0.0));
    out
}

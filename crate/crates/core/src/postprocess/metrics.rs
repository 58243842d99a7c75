use nalgebra::{DMatrix, DVector};

use crate::error::{check_same_len, Error, Result};
use crate::model::Partition;

fn xlnx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

fn contingency(a: &Partition, b: &Partition) -> Result<(Vec<usize>, Vec<usize>, Vec<usize>)> {
    check_same_len(a.len(), b.len())?;
    let (ka, kb) = (a.n_clusters(), b.n_clusters());
    let mut table = vec![0usize; ka * kb];
    for (&i, &j) in a.labels().iter().zip(b.labels()) {
        table[i * kb + j] += 1;
    }
    Ok((a.sizes(), b.sizes(), table))
}

/// Variation of information H(a) + H(b) − 2I(a, b), natural log.
pub fn vi_distance(a: &Partition, b: &Partition) -> Result<f64> {
    let (sa, sb, table) = contingency(a, b)?;
    let n = a.len() as f64;
    if n == 0.0 {
        return Ok(0.0);
    }
    let s = |v: &[usize]| v.iter().map(|&c| xlnx(c as f64)).sum::<f64>();
    Ok(((s(&sa) + s(&sb) - 2.0 * s(&table)) / n).max(0.0))
}

fn choose2(x: usize) -> f64 {
    let x = x as f64;
    x * (x - 1.0) / 2.0
}

/// Hubert–Arabie adjusted Rand index.
pub fn adjusted_rand_index(a: &Partition, b: &Partition) -> Result<f64> {
    let (sa, sb, table) = contingency(a, b)?;
    let index: f64 = table.iter().map(|&c| choose2(c)).sum();
    let ra: f64 = sa.iter().map(|&c| choose2(c)).sum();
    let rb: f64 = sb.iter().map(|&c| choose2(c)).sum();
    let expected = ra * rb / choose2(a.len());
    let max = 0.5 * (ra + rb);
    if max == expected {
        return Ok(if a == b { 1.0 } else { 0.0 });
    }
    Ok((index - expected) / (max - expected))
}

/// Mean absolute and mean squared prediction error.
pub fn prediction_errors(y_true: &DVector<f64>, y_pred: &DVector<f64>) -> Result<(f64, f64)> {
    check_same_len(y_true.len(), y_pred.len())?;
    if y_true.is_empty() {
        return Err(Error::Data("no predictions to score".into()));
    }
    let n = y_true.len() as f64;
    let r = y_true - y_pred;
    Ok((r.abs().sum() / n, r.norm_squared() / n))
}

/// Rank-based area under the ROC curve with ties credited one half. `None`
/// when either class is absent.
pub fn auc(scores: &[f64], labels: &[bool]) -> Option<f64> {
    let pos: Vec<f64> = scores.iter().zip(labels).filter(|(_, &l)| l).map(|(s, _)| *s).collect();
    let neg: Vec<f64> = scores.iter().zip(labels).filter(|(_, &l)| !l).map(|(s, _)| *s).collect();
    if pos.is_empty() || neg.is_empty() {
        return None;
    }
    let mut wins = 0.0;
    for &sp in &pos {
        for &sn in &neg {
            if sp > sn {
                wins += 1.0;
            } else if sp == sn {
                wins += 0.5;
            }
        }
    }
    Some(wins / (pos.len() * neg.len()) as f64)
}

/// Mean over rows of the AUC of the relevance scores 1 − Pᵢₗ against the
/// true nonzero pattern. Rows with only one class are skipped.
pub fn a_auc(p: &DMatrix<f64>, truth_nonzero: &DMatrix<bool>) -> Result<f64> {
    if p.shape() != truth_nonzero.shape() {
        return Err(Error::Data(format!(
            "probability matrix is {:?} but truth is {:?}",
            p.shape(),
            truth_nonzero.shape()
        )));
    }
    let mut total = 0.0;
    let mut used = 0usize;
    for i in 0..p.nrows() {
        let scores: Vec<f64> = p.row(i).iter().map(|v| 1.0 - v).collect();
        let labels: Vec<bool> = truth_nonzero.row(i).iter().copied().collect();
        if let Some(a) = auc(&scores, &labels) {
            total += a;
            used += 1;
        }
    }
    if used == 0 {
        return Err(Error::Data("every row has a single class; AUC undefined".into()));
    }
    if used < p.nrows() {
        log::info!("A-AUC skipped {} rows with a single class", p.nrows() - used);
    }
    Ok(total / used as f64)
}

/// (1/n) Σᵢ (1/p) ‖β̂_{d̂ᵢ} − βᵢ‖² from per-row estimated and true slopes.
pub fn average_squared_error(estimated: &DMatrix<f64>, truth: &DMatrix<f64>) -> Result<f64> {
    if estimated.shape() != truth.shape() {
        return Err(Error::Data(format!(
            "estimate is {:?} but truth is {:?}",
            estimated.shape(),
            truth.shape()
        )));
    }
    Ok((estimated - truth).norm_squared() / (truth.nrows() * truth.ncols()) as f64)
}

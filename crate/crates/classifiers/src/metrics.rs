//! Accuracy, per-class precision/recall, macro F-score, confusion matrix.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct ClassMetrics {
    pub label: i64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

#[derive(Debug, Clone)]
pub struct Metrics {
    pub accuracy: f64,
    pub macro_f: f64,
    pub per_class: Vec<ClassMetrics>,
    /// confusion[true][pred], indexed by position in `labels`.
    pub confusion: Vec<Vec<usize>>,
    pub labels: Vec<i64>,
}

/// Macro F is the unweighted mean over classes of the per-class F1,
/// with F1 = 0 when precision and recall are both undefined.
pub fn evaluate(y_true: &[i64], y_pred: &[i64], labels: &[i64]) -> Result<Metrics> {
    if y_true.is_empty() || y_pred.is_empty() {
        return Err(Error::Contract("evaluate on empty inputs".into()));
    }
    if y_true.len() != y_pred.len() {
        return Err(Error::Contract(format!(
            "evaluate length mismatch: {} true vs {} predicted",
            y_true.len(),
            y_pred.len()
        )));
    }
    let k = labels.len();
    let idx_of = |l: i64| -> Result<usize> {
        labels
            .iter()
            .position(|&x| x == l)
            .ok_or_else(|| Error::Contract(format!("label {l} not in label set {labels:?}")))
    };

    let mut confusion = vec![vec![0usize; k]; k];
    let mut correct = 0usize;
    for (&t, &p) in y_true.iter().zip(y_pred) {
        confusion[idx_of(t)?][idx_of(p)?] += 1;
        if t == p {
            correct += 1;
        }
    }

    let mut per_class = Vec::with_capacity(k);
    let mut f_sum = 0.0;
    for c in 0..k {
        let tp = confusion[c][c];
        let fp: usize = (0..k).filter(|&r| r != c).map(|r| confusion[r][c]).sum();
        let fn_: usize = (0..k).filter(|&p| p != c).map(|p| confusion[c][p]).sum();
        let support: usize = confusion[c].iter().sum();
        let precision = if tp + fp > 0 {
            tp as f64 / (tp + fp) as f64
        } else {
            0.0
        };
        let recall = if tp + fn_ > 0 {
            tp as f64 / (tp + fn_) as f64
        } else {
            0.0
        };
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        f_sum += f1;
        per_class.push(ClassMetrics {
            label: labels[c],
            precision,
            recall,
            f1,
            support,
        });
    }

    Ok(Metrics {
        accuracy: correct as f64 / y_true.len() as f64,
        macro_f: f_sum / k as f64,
        per_class,
        confusion,
        labels: labels.to_vec(),
    })
}

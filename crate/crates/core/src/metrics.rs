//! Binary classification metrics. The positive class is ransomware (label
//! 1), so recall is the fraction of ransomware samples caught.

use alloc::vec::Vec;

use crate::error::{config_err, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[cfg_attr(feature = "serde", serde(rename = "fn"))]
    pub fn_: usize,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }
}

fn check_labels(labels: &[u8], what: &str) -> Result<()> {
    match labels.iter().position(|&l| l > 1) {
        Some(i) => Err(config_err!("{what}[{i}] = {} is not a binary label", labels[i])),
        None => Ok(()),
    }
}

pub fn confusion(y_true: &[u8], y_pred: &[u8]) -> Result<ConfusionCounts> {
    if y_true.len() != y_pred.len() {
        return Err(config_err!(
            "label length mismatch: {} true vs {} predicted",
            y_true.len(),
            y_pred.len()
        ));
    }
    check_labels(y_true, "y_true")?;
    check_labels(y_pred, "y_pred")?;
    let mut c = ConfusionCounts::default();
    for (&t, &p) in y_true.iter().zip(y_pred) {
        match (t, p) {
            (1, 1) => c.tp += 1,
            (0, 1) => c.fp += 1,
            (0, 0) => c.tn += 1,
            _ => c.fn_ += 1,
        }
    }
    Ok(c)
}

/// Accuracy, precision, recall and F1 as fractions in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Summary {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// No positive predictions; precision is reported as 0.
    pub precision_undefined: bool,
    /// No positive samples; recall is reported as 0.
    pub recall_undefined: bool,
}

pub fn summary(c: &ConfusionCounts) -> Result<Summary> {
    let total = c.total();
    if total == 0 {
        return Err(config_err!("cannot summarize zero evaluated samples"));
    }
    let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    let precision = ratio(c.tp, c.tp + c.fp);
    let recall = ratio(c.tp, c.tp + c.fn_);
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Ok(Summary {
        accuracy: (c.tp + c.tn) as f64 / total as f64,
        precision,
        recall,
        f1,
        precision_undefined: c.tp + c.fp == 0,
        recall_undefined: c.tp + c.fn_ == 0,
    })
}

/// Which end of the score range indicates the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum PositiveDirection {
    Higher,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RocPoint {
    pub fpr: f64,
    pub tpr: f64,
    /// Score at which this point is reached; `None` for the (0, 0) origin.
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RocCurve {
    pub points: Vec<RocPoint>,
    pub auc: f64,
}

/// ROC curve and trapezoidal AUC. Tied scores move as one threshold step,
/// which makes the AUC equal to the Mann-Whitney statistic with ties
/// counted as one half.
pub fn roc_auc(y_true: &[u8], scores: &[f64], direction: PositiveDirection) -> Result<RocCurve> {
    if y_true.len() != scores.len() {
        return Err(config_err!(
            "label/score length mismatch: {} vs {}",
            y_true.len(),
            scores.len()
        ));
    }
    check_labels(y_true, "y_true")?;
    if let Some(i) = scores.iter().position(|s| !s.is_finite()) {
        return Err(config_err!("score[{i}] is not finite"));
    }
    let positives = y_true.iter().filter(|&&l| l == 1).count();
    let negatives = y_true.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(config_err!(
            "AUC undefined: need both classes, got {positives} positive and {negatives} negative"
        ));
    }

    let key = |s: f64| match direction {
        PositiveDirection::Higher => s,
        PositiveDirection::Lower => -s,
    };
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| key(scores[b]).total_cmp(&key(scores[a])));

    let mut points = Vec::with_capacity(scores.len() + 1);
    points.push(RocPoint {
        fpr: 0.0,
        tpr: 0.0,
        threshold: None,
    });
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut auc = 0.0;
    let mut i = 0;
    while i < order.len() {
        let current = key(scores[order[i]]);
        let (prev_tp, prev_fp) = (tp, fp);
        while i < order.len() && key(scores[order[i]]) == current {
            if y_true[order[i]] == 1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        // trapezoid in count space, normalized once at the end
        auc += (fp - prev_fp) as f64 * (tp + prev_tp) as f64 / 2.0;
        points.push(RocPoint {
            fpr: fp as f64 / negatives as f64,
            tpr: tp as f64 / positives as f64,
            threshold: Some(scores[order[i - 1]]),
        });
    }
    Ok(RocCurve {
        points,
        auc: auc / (positives as f64 * negatives as f64),
    })
}

/// Everything reported for one model on one test set.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Evaluation {
    pub counts: ConfusionCounts,
    pub summary: Summary,
    pub roc: RocCurve,
}

pub fn evaluate(y_true: &[u8], y_pred: &[u8], scores: &[f64], direction: PositiveDirection) -> Result<Evaluation> {
    let counts = confusion(y_true, y_pred)?;
    Ok(Evaluation {
        summary: summary(&counts)?,
        roc: roc_auc(y_true, scores, direction)?,
        counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn hand_counted_confusion() {
        let c = confusion(&[1, 1, 1, 0, 0], &[1, 1, 0, 1, 0]).unwrap();
        assert_eq!(
            c,
            ConfusionCounts {
                tp: 2,
                fp: 1,
                tn: 1,
                fn_: 1
            }
        );
    }

    #[test]
    fn confusion_edge_cases() {
        let perfect = confusion(&[0, 1, 1, 0], &[0, 1, 1, 0]).unwrap();
        assert_eq!((perfect.fp, perfect.fn_), (0, 0));
        let missed = confusion(&[1, 1, 1], &[0, 0, 0]).unwrap();
        assert_eq!((missed.tp, missed.fn_), (0, 3));
        assert!(confusion(&[1, 0], &[1]).is_err());
        assert!(confusion(&[2], &[1]).is_err());
    }

    #[test]
    fn hand_computed_summary() {
        let s = summary(&ConfusionCounts {
            tp: 2,
            fp: 1,
            tn: 1,
            fn_: 1,
        })
        .unwrap();
        assert_eq!(s.precision, 2.0 / 3.0);
        assert_eq!(s.recall, 2.0 / 3.0);
        assert!((s.f1 - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(s.accuracy, 3.0 / 5.0);
        assert!(!s.precision_undefined);
    }

    #[test]
    fn perfect_summary() {
        let s = summary(&confusion(&[1, 0, 1], &[1, 0, 1]).unwrap()).unwrap();
        assert_eq!((s.accuracy, s.precision, s.recall, s.f1), (1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn undefined_precision_is_flagged() {
        let s = summary(&ConfusionCounts {
            tp: 0,
            fp: 0,
            tn: 3,
            fn_: 2,
        })
        .unwrap();
        assert!(s.precision_undefined);
        assert_eq!(s.precision, 0.0);
        assert_eq!(s.f1, 0.0);
        assert!(summary(&ConfusionCounts::default()).is_err());
    }

    #[test]
    fn auc_pair_counting_example() {
        let roc = roc_auc(&[1, 0, 1, 0], &[0.9, 0.8, 0.3, 0.1], PositiveDirection::Higher).unwrap();
        assert_eq!(roc.auc, 0.75);
        assert_eq!(roc.points.first().unwrap().fpr, 0.0);
        let last = roc.points.last().unwrap();
        assert_eq!((last.fpr, last.tpr), (1.0, 1.0));
    }

    #[test]
    fn separated_scores_and_direction() {
        let y = [0, 0, 1, 1];
        let s = [0.1, 0.2, 0.8, 0.9];
        assert_eq!(roc_auc(&y, &s, PositiveDirection::Higher).unwrap().auc, 1.0);
        assert_eq!(roc_auc(&y, &s, PositiveDirection::Lower).unwrap().auc, 0.0);
        let neg: Vec<f64> = s.iter().map(|v| -v).collect();
        assert_eq!(roc_auc(&y, &neg, PositiveDirection::Lower).unwrap().auc, 1.0);
    }

    #[test]
    fn all_tied_scores_give_half() {
        let roc = roc_auc(&[0, 1, 0, 1, 1], &[0.5; 5], PositiveDirection::Higher).unwrap();
        assert_eq!(roc.auc, 0.5);
        assert_eq!(roc.points.len(), 2);
    }

    #[test]
    fn single_class_is_rejected() {
        assert!(roc_auc(&[1, 1], &[0.2, 0.3], PositiveDirection::Higher).is_err());
        assert!(roc_auc(&[1, 0], &[0.2, f64::NAN], PositiveDirection::Higher).is_err());
        assert!(roc_auc(&[1, 0], &[0.2], PositiveDirection::Higher).is_err());
    }

    #[test]
    fn roc_is_monotone() {
        let y = vec![1, 0, 0, 1, 1, 0, 1, 0, 0, 1];
        let s = vec![0.3, 0.3, 0.9, 0.1, 0.5, 0.5, 0.7, 0.2, 0.6, 0.3];
        let roc = roc_auc(&y, &s, PositiveDirection::Higher).unwrap();
        assert!(roc
            .points
            .windows(2)
            .all(|w| w[1].fpr >= w[0].fpr && w[1].tpr >= w[0].tpr));
    }
}

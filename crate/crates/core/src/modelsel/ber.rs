use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Which per-class error terms enter the balanced error rate.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BerVariant {
    /// `(FP_c + FN_c) / #samples_c`, averaged over every class of the
    /// vocabulary. A class without truth samples contributes `FP_c / 1`.
    #[default]
    FalsePositivesAndNegatives,
    /// Conventional `FN_c / #samples_c` (one minus per-class recall),
    /// averaged over the classes that occur in `truth`.
    FalseNegatives,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerBreakdown {
    pub value: f64,
    /// Classes that had no truth samples.
    pub classes_without_truth: Vec<usize>,
}

pub fn ber_breakdown(variant: BerVariant, truth: &[usize], predicted: &[usize], n_classes: usize) -> Result<BerBreakdown> {
    if truth.len() != predicted.len() {
        return Err(Error::LengthMismatch { left: truth.len(), right: predicted.len() });
    }
    if n_classes == 0 {
        return Err(Error::TooFewClasses(0));
    }
    let mut samples = alloc::vec![0usize; n_classes];
    let mut fp = alloc::vec![0usize; n_classes];
    let mut fneg = alloc::vec![0usize; n_classes];
    for (&t, &p) in truth.iter().zip(predicted) {
        for label in [t, p] {
            if label >= n_classes {
                return Err(Error::LabelOutOfRange { label, n_classes });
            }
        }
        samples[t] += 1;
        if t != p {
            fneg[t] += 1;
            fp[p] += 1;
        }
    }
    let classes_without_truth: Vec<usize> = (0..n_classes).filter(|&c| samples[c] == 0).collect();
    let value = match variant {
        BerVariant::FalsePositivesAndNegatives => {
            (0..n_classes).map(|c| (fp[c] + fneg[c]) as f64 / samples[c].max(1) as f64).sum::<f64>() / n_classes as f64
        }
        BerVariant::FalseNegatives => {
            let present = n_classes - classes_without_truth.len();
            if present == 0 {
                0.0
            } else {
                (0..n_classes).filter(|&c| samples[c] > 0).map(|c| fneg[c] as f64 / samples[c] as f64).sum::<f64>()
                    / present as f64
            }
        }
    };
    Ok(BerBreakdown { value, classes_without_truth })
}

/// Balanced error rate with false positives and false negatives per class.
pub fn balanced_error_rate(truth: &[usize], predicted: &[usize], n_classes: usize) -> Result<f64> {
    Ok(ber_breakdown(BerVariant::FalsePositivesAndNegatives, truth, predicted, n_classes)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn perfect_is_zero() {
        assert_eq!(balanced_error_rate(&[0, 1, 2, 1], &[0, 1, 2, 1], 3).unwrap(), 0.0);
    }

    #[test]
    fn hand_confusion_matrix() {
        // 10 A (id 0), 10 B (id 1); 2 A predicted B, 1 B predicted A
        let mut truth = vec![0; 10];
        truth.extend(vec![1; 10]);
        let mut pred = truth.clone();
        pred[0] = 1;
        pred[1] = 1;
        pred[10] = 0;
        let ber = balanced_error_rate(&truth, &pred, 2).unwrap();
        assert!((ber - 0.3).abs() < 1e-15);
        let conventional = ber_breakdown(BerVariant::FalseNegatives, &truth, &pred, 2).unwrap().value;
        assert!((conventional - 0.15).abs() < 1e-15);
    }

    #[test]
    fn constant_prediction() {
        let mut truth = vec![0; 10];
        truth.extend(vec![1; 10]);
        assert_eq!(balanced_error_rate(&truth, &[0; 20], 2).unwrap(), 1.0);
        assert_eq!(ber_breakdown(BerVariant::FalseNegatives, &truth, &[0; 20], 2).unwrap().value, 0.5);
    }

    #[test]
    fn class_without_truth() {
        let b = ber_breakdown(BerVariant::FalsePositivesAndNegatives, &[0, 0], &[0, 1], 2).unwrap();
        // class 0: (0 + 1) / 2, class 1: (1 + 0) / 1
        assert_eq!(b.value, 0.75);
        assert_eq!(b.classes_without_truth, [1]);
    }

    #[test]
    fn errors() {
        assert!(matches!(balanced_error_rate(&[0], &[0, 1], 2), Err(Error::LengthMismatch { .. })));
        assert!(matches!(balanced_error_rate(&[0], &[2], 2), Err(Error::LabelOutOfRange { label: 2, .. })));
    }
}

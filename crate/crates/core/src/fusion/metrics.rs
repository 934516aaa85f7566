use serde::Serialize;

use super::ProbVector;
use crate::error::{Error, Result};

/// Accuracy, per-class precision/recall/F1, macro-F1 and the confusion
/// matrix (`confusion[true][predicted]`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub n_samples: usize,
    pub accuracy: f64,
    pub precision: Vec<f64>,
    pub recall: Vec<f64>,
    pub f1: Vec<f64>,
    pub support: Vec<usize>,
    pub macro_f1: f64,
    pub confusion: Vec<Vec<usize>>,
    /// Classes that never occur in either labels or predictions; their F1 is 0.
    pub absent_classes: Vec<usize>,
}

/// Scores hard predictions; `n_classes` fixes the report width.
pub fn evaluate_classes(predicted: &[usize], labels: &[usize], n_classes: usize) -> Result<EvalReport> {
    if predicted.is_empty() {
        return Err(Error::InvalidInput("nothing to evaluate".into()));
    }
    if predicted.len() != labels.len() {
        return Err(Error::InvalidInput(format!(
            "{} predictions but {} labels",
            predicted.len(),
            labels.len()
        )));
    }
    if let Some(bad) = predicted.iter().chain(labels).find(|&&c| c >= n_classes) {
        return Err(Error::InvalidInput(format!(
            "class {bad} out of range for {n_classes} classes"
        )));
    }
    let mut confusion = vec![vec![0usize; n_classes]; n_classes];
    for (&p, &y) in predicted.iter().zip(labels) {
        confusion[y][p] += 1;
    }
    let support: Vec<usize> = confusion.iter().map(|row| row.iter().sum()).collect();
    let predicted_count: Vec<usize> = (0..n_classes)
        .map(|c| confusion.iter().map(|row| row[c]).sum())
        .collect();
    let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    let precision: Vec<f64> = (0..n_classes)
        .map(|c| ratio(confusion[c][c], predicted_count[c]))
        .collect();
    let recall: Vec<f64> = (0..n_classes).map(|c| ratio(confusion[c][c], support[c])).collect();
    let f1: Vec<f64> = precision
        .iter()
        .zip(&recall)
        .map(|(&p, &r)| if p + r > 0.0 { 2.0 * p * r / (p + r) } else { 0.0 })
        .collect();
    let correct: usize = (0..n_classes).map(|c| confusion[c][c]).sum();
    let absent_classes = (0..n_classes)
        .filter(|&c| support[c] == 0 && predicted_count[c] == 0)
        .collect();
    Ok(EvalReport {
        n_samples: labels.len(),
        accuracy: correct as f64 / labels.len() as f64,
        macro_f1: f1.iter().sum::<f64>() / n_classes as f64,
        precision,
        recall,
        f1,
        support,
        confusion,
        absent_classes,
    })
}

/// Argmax decisions (lowest index on ties) scored against `labels`.
pub fn evaluate(preds: &[ProbVector], labels: &[usize]) -> Result<EvalReport> {
    let first = preds
        .first()
        .ok_or_else(|| Error::InvalidInput("nothing to evaluate".into()))?;
    let k = first.n_classes();
    if preds.iter().any(|p| p.n_classes() != k) {
        return Err(Error::InvalidInput("predictions differ in class count".into()));
    }
    let predicted: Vec<usize> = preds.iter().map(ProbVector::predicted_class).collect();
    evaluate_classes(&predicted, labels, k)
}

impl EvalReport {
    /// Plain-text table with optional class names.
    pub fn render_text(&self, class_names: &[String]) -> String {
        use std::fmt::Write;
        let k = self.f1.len();
        let name = |c: usize| class_names.get(c).cloned().unwrap_or_else(|| format!("class_{c}"));
        let mut s = String::new();
        let _ = writeln!(s, "samples   {}", self.n_samples);
        let _ = writeln!(s, "accuracy  {:.4}", self.accuracy);
        let _ = writeln!(s, "macro_f1  {:.4}", self.macro_f1);
        let _ = writeln!(
            s,
            "{:<12} {:>9} {:>9} {:>9} {:>8}",
            "class", "precision", "recall", "f1", "support"
        );
        for c in 0..k {
            let flag = if self.absent_classes.contains(&c) {
                "  (absent)"
            } else {
                ""
            };
            let _ = writeln!(
                s,
                "{:<12} {:>9.4} {:>9.4} {:>9.4} {:>8}{flag}",
                name(c),
                self.precision[c],
                self.recall[c],
                self.f1[c],
                self.support[c]
            );
        }
        let _ = writeln!(s, "confusion (rows = true, cols = predicted)");
        for (c, row) in self.confusion.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>6}")).collect();
            let _ = writeln!(s, "{:<12} {}", name(c), cells.join(""));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_predictions() {
        let r = evaluate_classes(&[0, 1, 2, 1], &[0, 1, 2, 1], 3).unwrap();
        assert_eq!(r.accuracy, 1.0);
        assert!(r.f1.iter().all(|&f| f == 1.0));
        assert_eq!(r.confusion, vec![vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn four_sample_hand_count() {
        let r = evaluate_classes(&[0, 0, 1, 1], &[0, 1, 1, 1], 2).unwrap();
        assert_eq!(r.confusion, vec![vec![1, 0], vec![1, 2]]);
        assert_eq!(r.accuracy, 0.75);
        assert_eq!(r.precision, vec![0.5, 1.0]);
        assert!((r.recall[1] - 2.0 / 3.0).abs() < 1e-15);
        assert!((r.f1[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((r.f1[1] - 0.8).abs() < 1e-15);
        assert!((r.macro_f1 - (2.0 / 3.0 + 0.8) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn absent_class_flagged() {
        let r = evaluate_classes(&[0, 1], &[0, 1], 3).unwrap();
        assert_eq!(r.f1[2], 0.0);
        assert_eq!(r.absent_classes, vec![2]);
        assert!((r.macro_f1 - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        assert!(evaluate_classes(&[], &[], 2).is_err());
        assert!(evaluate_classes(&[0], &[0, 1], 2).is_err());
        assert!(evaluate_classes(&[3], &[0], 2).is_err());
        assert!(evaluate(&[], &[]).is_err());
    }

    #[test]
    fn text_rendering_mentions_everything() {
        let r = evaluate_classes(&[0, 0, 1, 1], &[0, 1, 1, 1], 2).unwrap();
        let t = r.render_text(&["Normal".into(), "ASD".into()]);
        assert!(t.contains("accuracy  0.7500"));
        assert!(t.contains("macro_f1  0.7333"));
        assert!(t.contains("ASD"));
    }
}

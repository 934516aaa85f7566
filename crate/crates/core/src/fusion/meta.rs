//! Stacked generalisation: a softmax-regression meta-learner over the
//! concatenated posteriors of all base models.

use super::{check_consistent, ProbVector};
use crate::error::{Error, Result};
use crate::model::{predict_proba, train_softmax, SoftmaxParams, TrainConfig};

/// Concatenates model posteriors in model order.
pub fn stack_predictions(preds: &[&ProbVector]) -> Result<Vec<f64>> {
    check_consistent(preds)?;
    Ok(preds.iter().flat_map(|p| p.as_slice().iter().copied()).collect())
}

/// Trains the meta-learner on held-out (validation) base predictions.
///
/// `stacked[i]` is [`stack_predictions`] for sample `i`. There is no further
/// split: early stopping monitors accuracy on the same samples.
pub fn fit_meta_ensemble(
    stacked: &[Vec<f64>],
    labels: &[usize],
    n_classes: usize,
    cfg: &TrainConfig,
) -> Result<SoftmaxParams> {
    if stacked.len() < n_classes {
        return Err(Error::InvalidInput(format!(
            "meta-ensemble needs at least {n_classes} samples, got {}",
            stacked.len()
        )));
    }
    if stacked.iter().flatten().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(Error::InvalidInput("stacked features must be probabilities".into()));
    }
    let (params, _log) = train_softmax(stacked, labels, stacked, labels, n_classes, cfg)?;
    Ok(params)
}

pub fn meta_predict(params: &SoftmaxParams, preds: &[&ProbVector]) -> Result<ProbVector> {
    let x = stack_predictions(preds)?;
    ProbVector::normalized(predict_proba(params, &x)?)
}

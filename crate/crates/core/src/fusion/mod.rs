//! Late fusion of per-model class posteriors and the evaluation metrics used
//! to compare base models against their fused combinations.

mod meta;
mod metrics;
mod scheme;
mod weighted;

pub use meta::{fit_meta_ensemble, meta_predict, stack_predictions};
pub use metrics::{evaluate, evaluate_classes, EvalReport};
pub use scheme::{AccuracyWeighting, ClassF1Weighting, FusionRegistry, FusionScheme, MetaEnsembleScheme};
pub use weighted::{fuse_class_weighted, fuse_scalar_weighted};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::SoftmaxParams;

/// Index of the largest entry; ties go to the lowest index.
pub fn argmax(p: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in p.iter().enumerate().skip(1) {
        if v > p[best] {
            best = i;
        }
    }
    best
}

/// Class distribution: non-negative entries summing to one within 1e-9.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    pub const SUM_TOLERANCE: f64 = 1e-9;

    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidInput("empty probability vector".into()));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidInput(
                "probabilities must be finite and non-negative".into(),
            ));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > Self::SUM_TOLERANCE {
            return Err(Error::InvalidInput(format!("probabilities sum to {sum}, not 1")));
        }
        Ok(ProbVector(probs))
    }

    /// Divides by the total; the entries must be non-negative with a positive sum.
    pub fn normalized(values: Vec<f64>) -> Result<Self> {
        let sum: f64 = values.iter().sum();
        if !(sum > 0.0 && sum.is_finite()) {
            return Err(Error::InvalidInput(format!("cannot normalise values summing to {sum}")));
        }
        ProbVector::new(values.into_iter().map(|v| v / sum).collect())
    }

    pub fn n_classes(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn predicted_class(&self) -> usize {
        argmax(&self.0)
    }
}

impl AsRef<[f64]> for ProbVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FusionKind {
    ValAccuracy,
    ClassF1,
    MetaEnsemble,
}

/// Fitted combination rule.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FusionWeights {
    /// One weight per model.
    ValAccuracy(Vec<f64>),
    /// `weights[model][class]`.
    ClassF1(Vec<Vec<f64>>),
    /// Softmax regression over the concatenated model posteriors.
    MetaEnsemble(SoftmaxParams),
}

impl FusionWeights {
    pub fn kind(&self) -> FusionKind {
        match self {
            FusionWeights::ValAccuracy(_) => FusionKind::ValAccuracy,
            FusionWeights::ClassF1(_) => FusionKind::ClassF1,
            FusionWeights::MetaEnsemble(_) => FusionKind::MetaEnsemble,
        }
    }

    /// Fuses one sample's predictions, one per model in fitting order.
    pub fn fuse(&self, preds: &[&ProbVector]) -> Result<ProbVector> {
        match self {
            FusionWeights::ValAccuracy(w) => fuse_scalar_weighted(preds, w),
            FusionWeights::ClassF1(w) => fuse_class_weighted(preds, w),
            FusionWeights::MetaEnsemble(params) => meta_predict(params, preds),
        }
    }
}

pub(crate) fn check_consistent(preds: &[&ProbVector]) -> Result<usize> {
    let first = preds
        .first()
        .ok_or_else(|| Error::InvalidInput("no model predictions to fuse".into()))?;
    let k = first.n_classes();
    if preds.iter().any(|p| p.n_classes() != k) {
        return Err(Error::InvalidInput("models disagree on the number of classes".into()));
    }
    Ok(k)
}

use std::collections::BTreeMap;

use super::{evaluate, fit_meta_ensemble, stack_predictions, FusionWeights, ProbVector};
use crate::error::{Error, Result};
use crate::model::TrainConfig;

/// A way of deriving [`FusionWeights`] from validation predictions.
///
/// `val_preds[m][i]` is model `m`'s posterior for validation sample `i`.
pub trait FusionScheme: Send + Sync {
    fn name(&self) -> &'static str;

    fn describe(&self) -> &'static str;

    fn fit(&self, val_preds: &[Vec<ProbVector>], labels: &[usize]) -> Result<FusionWeights>;
}

fn check_shapes(val_preds: &[Vec<ProbVector>], labels: &[usize]) -> Result<usize> {
    if val_preds.is_empty() {
        return Err(Error::InvalidInput("no models supplied".into()));
    }
    if labels.is_empty() {
        return Err(Error::InvalidInput("no validation samples".into()));
    }
    if val_preds.iter().any(|m| m.len() != labels.len()) {
        return Err(Error::Alignment("every model needs one prediction per label".into()));
    }
    let k = val_preds[0][0].n_classes();
    if val_preds.iter().flatten().any(|p| p.n_classes() != k) {
        return Err(Error::InvalidInput("models disagree on the number of classes".into()));
    }
    Ok(k)
}

/// Scalar weight per model: its validation accuracy.
pub struct AccuracyWeighting;

impl FusionScheme for AccuracyWeighting {
    fn name(&self) -> &'static str {
        "accuracy"
    }

    fn describe(&self) -> &'static str {
        "weighted mean of posteriors, weight = model validation accuracy"
    }

    fn fit(&self, val_preds: &[Vec<ProbVector>], labels: &[usize]) -> Result<FusionWeights> {
        check_shapes(val_preds, labels)?;
        let weights = val_preds
            .iter()
            .map(|preds| evaluate(preds, labels).map(|r| r.accuracy))
            .collect::<Result<Vec<_>>>()?;
        if weights.iter().all(|&w| w == 0.0) {
            return Err(Error::InvalidWeights("every model has zero validation accuracy".into()));
        }
        Ok(FusionWeights::ValAccuracy(weights))
    }
}

/// Per-class weights: each model's validation F1 on that class. A class on
/// which every model scores F1 = 0 falls back to equal weights.
pub struct ClassF1Weighting;

impl FusionScheme for ClassF1Weighting {
    fn name(&self) -> &'static str {
        "classf1"
    }

    fn describe(&self) -> &'static str {
        "per-class weighted mean of posteriors, weight = model F1 on that class"
    }

    fn fit(&self, val_preds: &[Vec<ProbVector>], labels: &[usize]) -> Result<FusionWeights> {
        let k = check_shapes(val_preds, labels)?;
        let mut weights = val_preds
            .iter()
            .map(|preds| evaluate(preds, labels).map(|r| r.f1))
            .collect::<Result<Vec<_>>>()?;
        for c in 0..k {
            if weights.iter().all(|row| row[c] == 0.0) {
                for row in weights.iter_mut() {
                    row[c] = 1.0;
                }
            }
        }
        Ok(FusionWeights::ClassF1(weights))
    }
}

/// Logistic-regression meta-learner over stacked posteriors.
pub struct MetaEnsembleScheme {
    pub train: TrainConfig,
}

impl FusionScheme for MetaEnsembleScheme {
    fn name(&self) -> &'static str {
        "meta"
    }

    fn describe(&self) -> &'static str {
        "softmax regression trained on the concatenated model posteriors"
    }

    fn fit(&self, val_preds: &[Vec<ProbVector>], labels: &[usize]) -> Result<FusionWeights> {
        let k = check_shapes(val_preds, labels)?;
        let stacked = (0..labels.len())
            .map(|i| {
                let row: Vec<&ProbVector> = val_preds.iter().map(|m| &m[i]).collect();
                stack_predictions(&row)
            })
            .collect::<Result<Vec<_>>>()?;
        let params = fit_meta_ensemble(&stacked, labels, k, &self.train)?;
        Ok(FusionWeights::MetaEnsemble(params))
    }
}

/// Fusion schemes addressable by name.
pub struct FusionRegistry {
    schemes: BTreeMap<&'static str, Box<dyn FusionScheme>>,
}

impl FusionRegistry {
    pub fn empty() -> Self {
        FusionRegistry {
            schemes: BTreeMap::new(),
        }
    }

    /// `accuracy`, `classf1` and `meta` (the latter trained with `meta_train`).
    pub fn with_defaults(meta_train: TrainConfig) -> Self {
        let mut r = Self::empty();
        r.register(Box::new(AccuracyWeighting));
        r.register(Box::new(ClassF1Weighting));
        r.register(Box::new(MetaEnsembleScheme { train: meta_train }));
        r
    }

    pub fn register(&mut self, scheme: Box<dyn FusionScheme>) {
        self.schemes.insert(scheme.name(), scheme);
    }

    pub fn get(&self, name: &str) -> Result<&dyn FusionScheme> {
        self.schemes.get(name).map(|s| s.as_ref()).ok_or_else(|| {
            Error::InvalidConfig(format!(
                "unknown fusion scheme {name:?}; available: {}",
                self.names().join(", ")
            ))
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.schemes.keys().copied().collect()
    }
}

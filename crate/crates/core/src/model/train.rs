use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::softmax::{batch_loss, gradient_of_loss, predict_proba, SoftmaxParams};
use crate::error::{Error, Result};
use crate::fusion::argmax;
use crate::util::stream_rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub batch_size: usize,
    pub max_epochs: usize,
    pub patience: usize,
    pub l2: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.1,
            batch_size: 32,
            max_epochs: 100,
            patience: 7,
            l2: 1e-4,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidConfig("learning_rate must be non-negative".into()));
        }
        if self.batch_size == 0 || self.max_epochs == 0 || self.patience == 0 {
            return Err(Error::InvalidConfig(
                "batch_size, max_epochs and patience must be positive".into(),
            ));
        }
        if !self.l2.is_finite() || self.l2 < 0.0 {
            return Err(Error::InvalidConfig("l2 must be finite and non-negative".into()));
        }
        Ok(())
    }
}

/// Patience counter over a maximised metric. Only a strictly larger value
/// counts as an improvement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EarlyStopState {
    pub best_metric: f64,
    pub best_epoch: usize,
    pub epochs_since_improvement: usize,
    pub stopped: bool,
    patience: usize,
}

impl EarlyStopState {
    pub fn new(patience: usize) -> Self {
        EarlyStopState {
            best_metric: f64::NEG_INFINITY,
            best_epoch: 0,
            epochs_since_improvement: 0,
            stopped: false,
            patience,
        }
    }

    /// Records the metric for a 1-based `epoch`; returns whether it improved.
    pub fn update(&mut self, epoch: usize, metric: f64) -> bool {
        let improved = metric > self.best_metric;
        if improved {
            self.best_metric = metric;
            self.best_epoch = epoch;
            self.epochs_since_improvement = 0;
        } else {
            self.epochs_since_improvement += 1;
        }
        self.stopped = self.epochs_since_improvement >= self.patience;
        improved
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_loss: f64,
    pub val_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainLog {
    pub epochs: Vec<EpochRecord>,
    pub best_epoch: usize,
    pub best_val_accuracy: f64,
    pub stopped_early: bool,
}

impl TrainLog {
    pub fn last_epoch(&self) -> usize {
        self.epochs.last().map_or(0, |e| e.epoch)
    }
}

fn accuracy(params: &SoftmaxParams, xs: &[Vec<f64>], ys: &[usize]) -> Result<f64> {
    let mut correct = 0usize;
    for (x, &y) in xs.iter().zip(ys) {
        if argmax(&predict_proba(params, x)?) == y {
            correct += 1;
        }
    }
    Ok(correct as f64 / ys.len() as f64)
}

/// Mini-batch SGD on softmax cross-entropy, starting from zero parameters.
///
/// Each epoch visits the training set in a shuffled order drawn from
/// `(seed, epoch)`. After every epoch the validation accuracy feeds an
/// [`EarlyStopState`]; the returned parameters are the snapshot from the
/// best validation epoch.
pub fn train_softmax(
    features: &[Vec<f64>],
    labels: &[usize],
    val_features: &[Vec<f64>],
    val_labels: &[usize],
    n_classes: usize,
    cfg: &TrainConfig,
) -> Result<(SoftmaxParams, TrainLog)> {
    cfg.validate()?;
    if features.is_empty() || val_features.is_empty() {
        return Err(Error::InvalidInput(
            "train and validation splits must be non-empty".into(),
        ));
    }
    if features.len() != labels.len() || val_features.len() != val_labels.len() {
        return Err(Error::InvalidInput("features and labels differ in length".into()));
    }
    if n_classes == 0 {
        return Err(Error::InvalidInput("need at least one class".into()));
    }
    let dim = features[0].len();
    if features.iter().chain(val_features).any(|f| f.len() != dim) {
        return Err(Error::InvalidInput("feature vectors differ in length".into()));
    }
    if let Some(bad) = labels.iter().chain(val_labels).find(|&&y| y >= n_classes) {
        return Err(Error::InvalidInput(format!(
            "label {bad} out of range for {n_classes} classes"
        )));
    }

    let mut params = SoftmaxParams::zeros(n_classes, dim);
    let mut best = params.clone();
    let mut state = EarlyStopState::new(cfg.patience);
    let mut epochs = Vec::new();
    let mut order: Vec<usize> = (0..features.len()).collect();
    let full: Vec<(&[f64], usize)> = features
        .iter()
        .map(|f| f.as_slice())
        .zip(labels.iter().copied())
        .collect();

    for epoch in 1..=cfg.max_epochs {
        let mut rng = stream_rng(cfg.seed, epoch as u64);
        order.sort_unstable();
        order.shuffle(&mut rng);
        for chunk in order.chunks(cfg.batch_size) {
            let batch: Vec<(&[f64], usize)> = chunk.iter().map(|&i| full[i]).collect();
            let grad = gradient_of_loss(&params, &batch, cfg.l2)?;
            for (w, g) in params.weights_mut().iter_mut().zip(&grad.weights) {
                *w -= cfg.learning_rate * g;
            }
            for (b, g) in params.bias_mut().iter_mut().zip(&grad.bias) {
                *b -= cfg.learning_rate * g;
            }
        }
        let train_loss = batch_loss(&params, &full, cfg.l2)?;
        if !train_loss.is_finite() || params.weights().iter().any(|w| !w.is_finite()) {
            return Err(Error::Divergence { epoch });
        }
        let val_accuracy = accuracy(&params, val_features, val_labels)?;
        epochs.push(EpochRecord {
            epoch,
            train_loss,
            val_accuracy,
        });
        if state.update(epoch, val_accuracy) {
            best = params.clone();
        }
        if state.stopped {
            break;
        }
    }

    let log = TrainLog {
        epochs,
        best_epoch: state.best_epoch,
        best_val_accuracy: state.best_metric,
        stopped_early: state.stopped,
    };
    Ok((best, log))
}

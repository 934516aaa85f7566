use serde::Serialize;

use crate::error::{Error, Result};

/// Weights are `n_classes x n_features`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SoftmaxParams {
    n_classes: usize,
    n_features: usize,
    weights: Vec<f64>,
    bias: Vec<f64>,
}

impl SoftmaxParams {
    pub fn zeros(n_classes: usize, n_features: usize) -> Self {
        SoftmaxParams {
            n_classes,
            n_features,
            weights: vec![0.0; n_classes * n_features],
            bias: vec![0.0; n_classes],
        }
    }

    pub fn new(n_classes: usize, n_features: usize, weights: Vec<f64>, bias: Vec<f64>) -> Result<Self> {
        if n_classes == 0 {
            return Err(Error::InvalidInput("need at least one class".into()));
        }
        if weights.len() != n_classes * n_features || bias.len() != n_classes {
            return Err(Error::InvalidInput(format!(
                "parameter sizes {}/{} do not match {n_classes} classes x {n_features} features",
                weights.len(),
                bias.len()
            )));
        }
        if weights.iter().chain(&bias).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite parameters".into()));
        }
        Ok(SoftmaxParams {
            n_classes,
            n_features,
            weights,
            bias,
        })
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    pub(crate) fn weights_mut(&mut self) -> &mut [f64] {
        &mut self.weights
    }

    pub(crate) fn bias_mut(&mut self) -> &mut [f64] {
        &mut self.bias
    }

    pub fn weight(&self, class: usize, feature: usize) -> f64 {
        self.weights[class * self.n_features + feature]
    }

    pub fn logits(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n_features {
            return Err(Error::InvalidInput(format!(
                "model expects {} features, got {}",
                self.n_features,
                x.len()
            )));
        }
        Ok((0..self.n_classes)
            .map(|c| {
                let row = &self.weights[c * self.n_features..(c + 1) * self.n_features];
                self.bias[c] + row.iter().zip(x).map(|(w, v)| w * v).sum::<f64>()
            })
            .collect())
    }
}

/// Numerically stable softmax of `W x + b`.
pub fn predict_proba(params: &SoftmaxParams, x: &[f64]) -> Result<Vec<f64>> {
    Ok(softmax(&params.logits(x)?))
}

pub(crate) fn softmax(z: &[f64]) -> Vec<f64> {
    let max = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = z.iter().map(|v| (v - max).exp()).collect();
    let total: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / total).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

fn check_batch(params: &SoftmaxParams, batch: &[(&[f64], usize)]) -> Result<()> {
    if batch.is_empty() {
        return Err(Error::InvalidInput("empty batch".into()));
    }
    for (x, y) in batch {
        if *y >= params.n_classes {
            return Err(Error::InvalidInput(format!(
                "label {y} out of range for {} classes",
                params.n_classes
            )));
        }
        if x.len() != params.n_features {
            return Err(Error::InvalidInput("feature dimension mismatch".into()));
        }
    }
    Ok(())
}

/// Mean cross-entropy over the batch plus `l2/2 * ||W||^2` (bias unpenalised).
pub fn batch_loss(params: &SoftmaxParams, batch: &[(&[f64], usize)], l2: f64) -> Result<f64> {
    check_batch(params, batch)?;
    let mut ce = 0.0;
    for (x, y) in batch {
        let z = params.logits(x)?;
        let max = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let log_sum = max + z.iter().map(|v| (v - max).exp()).sum::<f64>().ln();
        ce += log_sum - z[*y];
    }
    let penalty = 0.5 * l2 * params.weights.iter().map(|w| w * w).sum::<f64>();
    Ok(ce / batch.len() as f64 + penalty)
}

/// Analytic gradient of [`batch_loss`]:
/// `dW = mean((p - onehot(y)) x^T) + l2 W`, `db = mean(p - onehot(y))`.
pub fn gradient_of_loss(params: &SoftmaxParams, batch: &[(&[f64], usize)], l2: f64) -> Result<Gradient> {
    check_batch(params, batch)?;
    let (k, d) = (params.n_classes, params.n_features);
    let mut gw = vec![0.0; k * d];
    let mut gb = vec![0.0; k];
    for (x, y) in batch {
        let mut p = predict_proba(params, x)?;
        p[*y] -= 1.0;
        for c in 0..k {
            gb[c] += p[c];
            let row = &mut gw[c * d..(c + 1) * d];
            for (g, v) in row.iter_mut().zip(x.iter()) {
                *g += p[c] * v;
            }
        }
    }
    let n = batch.len() as f64;
    for (g, w) in gw.iter_mut().zip(&params.weights) {
        *g = *g / n + l2 * w;
    }
    for g in gb.iter_mut() {
        *g /= n;
    }
    Ok(Gradient { weights: gw, bias: gb })
}

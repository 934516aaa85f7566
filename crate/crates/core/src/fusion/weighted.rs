use super::{check_consistent, ProbVector};
use crate::error::{Error, Result};

/// Grid the normalised scalar weights are snapped to. Rescaling every weight
/// by the same positive factor then reproduces the fused vector bit for bit,
/// even though `fl(lambda * w)` is not exactly proportional to `w`.
const WEIGHT_GRID: f64 = 4_294_967_296.0; // 2^32

fn canonical_weights(weights: &[f64]) -> Result<Vec<f64>> {
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::InvalidWeights("weights must be finite and non-negative".into()));
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidWeights("all weights are zero".into()));
    }
    Ok(weights
        .iter()
        .map(|w| (w / total * WEIGHT_GRID).round() / WEIGHT_GRID)
        .collect())
}

/// `p_c = sum_m w_m p_{m,c} / sum_m w_m`.
pub fn fuse_scalar_weighted(preds: &[&ProbVector], weights: &[f64]) -> Result<ProbVector> {
    let k = check_consistent(preds)?;
    if weights.len() != preds.len() {
        return Err(Error::InvalidWeights(format!(
            "{} weights for {} models",
            weights.len(),
            preds.len()
        )));
    }
    let w = canonical_weights(weights)?;
    if preds.len() == 1 {
        return Ok(preds[0].clone());
    }
    let total: f64 = w.iter().sum();
    let fused = (0..k)
        .map(|c| preds.iter().zip(&w).map(|(p, wm)| wm * p.as_slice()[c]).sum::<f64>() / total)
        .collect();
    ProbVector::new(fused)
}

/// `q_c = sum_m w_{m,c} p_{m,c} / sum_m w_{m,c}`, renormalised to sum to one.
pub fn fuse_class_weighted(preds: &[&ProbVector], class_weights: &[Vec<f64>]) -> Result<ProbVector> {
    let k = check_consistent(preds)?;
    if class_weights.len() != preds.len() || class_weights.iter().any(|row| row.len() != k) {
        return Err(Error::InvalidWeights(format!(
            "class weights must be {} models x {k} classes",
            preds.len()
        )));
    }
    if class_weights.iter().flatten().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::InvalidWeights("weights must be finite and non-negative".into()));
    }
    let mut q = Vec::with_capacity(k);
    for c in 0..k {
        let denom: f64 = class_weights.iter().map(|row| row[c]).sum();
        if denom <= 0.0 {
            return Err(Error::InvalidWeights(format!("class {c} has all-zero weights")));
        }
        let num: f64 = preds
            .iter()
            .zip(class_weights)
            .map(|(p, row)| row[c] * p.as_slice()[c])
            .sum();
        q.push(num / denom);
    }
    if preds.len() == 1 {
        return Ok(preds[0].clone());
    }
    ProbVector::normalized(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(v: &[f64]) -> ProbVector {
        ProbVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn hand_weighted_mean() {
        let (a, b) = (pv(&[0.6, 0.4]), pv(&[0.3, 0.7]));
        let out = fuse_scalar_weighted(&[&a, &b], &[0.8, 0.6]).unwrap();
        assert!((out.as_slice()[0] - 0.66 / 1.4).abs() < 1e-9);
        assert!((out.as_slice()[1] - 0.74 / 1.4).abs() < 1e-9);
    }

    #[test]
    fn equal_weights_average() {
        let (a, b) = (pv(&[0.2, 0.8]), pv(&[0.6, 0.4]));
        let out = fuse_scalar_weighted(&[&a, &b], &[3.0, 3.0]).unwrap();
        assert!((out.as_slice()[0] - 0.4).abs() < 1e-15);
    }

    #[test]
    fn single_model_passthrough() {
        let a = pv(&[0.1, 0.2, 0.7]);
        assert_eq!(fuse_scalar_weighted(&[&a], &[0.3]).unwrap(), a);
        assert_eq!(fuse_class_weighted(&[&a], &[vec![0.1, 0.5, 0.9]]).unwrap(), a);
    }

    #[test]
    fn zero_weights_rejected() {
        let a = pv(&[0.5, 0.5]);
        assert!(matches!(
            fuse_scalar_weighted(&[&a, &a], &[0.0, 0.0]),
            Err(Error::InvalidWeights(_))
        ));
        assert!(matches!(
            fuse_class_weighted(&[&a, &a], &[vec![1.0, 0.0], vec![1.0, 0.0]]),
            Err(Error::InvalidWeights(_))
        ));
        assert!(fuse_scalar_weighted(&[&a, &a], &[1.0, -1.0]).is_err());
        assert!(fuse_scalar_weighted(&[&a, &a], &[1.0]).is_err());
    }

    #[test]
    fn class_selection_then_renormalize() {
        let (a, b) = (pv(&[0.9, 0.1]), pv(&[0.2, 0.8]));
        let out = fuse_class_weighted(&[&a, &b], &[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!((out.as_slice()[0] - 9.0 / 17.0).abs() < 1e-12);
        assert!((out.as_slice()[1] - 8.0 / 17.0).abs() < 1e-12);
    }

    #[test]
    fn equal_class_weights_reduce_to_scalar() {
        let (a, b, c) = (pv(&[0.2, 0.3, 0.5]), pv(&[0.6, 0.3, 0.1]), pv(&[0.1, 0.1, 0.8]));
        let cw = vec![vec![0.7; 3]; 3];
        let x = fuse_class_weighted(&[&a, &b, &c], &cw).unwrap();
        let y = fuse_scalar_weighted(&[&a, &b, &c], &[1.0, 1.0, 1.0]).unwrap();
        for (u, v) in x.as_slice().iter().zip(y.as_slice()) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn mismatched_classes_rejected() {
        let (a, b) = (pv(&[0.5, 0.5]), pv(&[0.2, 0.3, 0.5]));
        assert!(fuse_scalar_weighted(&[&a, &b], &[1.0, 1.0]).is_err());
        assert!(fuse_scalar_weighted(&[], &[]).is_err());
    }
}

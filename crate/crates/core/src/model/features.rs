use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix2D;

pub type FeatureVector = Vec<f64>;

/// Means over a `grid_rows x grid_cols` partition into near-equal cells,
/// concatenated row-major.
pub fn pool_features(m: &Matrix2D, grid: (usize, usize)) -> Result<FeatureVector> {
    let (gr, gc) = grid;
    if gr == 0 || gc == 0 || gr > m.rows() || gc > m.cols() {
        return Err(Error::InvalidConfig(format!(
            "pooling grid {gr}x{gc} does not fit a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let mut out = Vec::with_capacity(gr * gc);
    for i in 0..gr {
        let (r0, r1) = (i * m.rows() / gr, (i + 1) * m.rows() / gr);
        for j in 0..gc {
            let (c0, c1) = (j * m.cols() / gc, (j + 1) * m.cols() / gc);
            let sum: f64 = (r0..r1).map(|r| m.row(r)[c0..c1].iter().sum::<f64>()).sum();
            out.push(sum / ((r1 - r0) * (c1 - c0)) as f64);
        }
    }
    Ok(out)
}

/// Per-feature standardisation fitted on the training split. Features with
/// zero spread keep unit scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureScaler {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl FeatureScaler {
    pub fn fit(features: &[FeatureVector]) -> Result<Self> {
        let first = features
            .first()
            .ok_or_else(|| Error::InvalidInput("cannot fit a scaler on zero samples".into()))?;
        let dim = first.len();
        if features.iter().any(|f| f.len() != dim) {
            return Err(Error::InvalidInput("feature vectors differ in length".into()));
        }
        let n = features.len() as f64;
        let mean: Vec<f64> = (0..dim)
            .map(|d| features.iter().map(|f| f[d]).sum::<f64>() / n)
            .collect();
        let std = (0..dim)
            .map(|d| {
                let var = features.iter().map(|f| (f[d] - mean[d]).powi(2)).sum::<f64>() / n;
                let s = var.sqrt();
                if s > 1e-12 {
                    s
                } else {
                    1.0
                }
            })
            .collect();
        Ok(FeatureScaler { mean, std })
    }

    pub fn transform(&self, x: &[f64]) -> Result<FeatureVector> {
        if x.len() != self.mean.len() {
            return Err(Error::InvalidInput(format!(
                "scaler expects {} features, got {}",
                self.mean.len(),
                x.len()
            )));
        }
        Ok(x.iter()
            .zip(self.mean.iter().zip(&self.std))
            .map(|(v, (m, s))| (v - m) / s)
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_grid_returns_entries() {
        let m = Matrix2D::new(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(pool_features(&m, (2, 2)).unwrap(), vec![1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn constant_matrix() {
        let m = Matrix2D::new(5, 7, vec![3.0; 35]).unwrap();
        assert!(pool_features(&m, (3, 4)).unwrap().iter().all(|&v| v == 3.0));
    }

    #[test]
    fn quadrant_means() {
        let m = Matrix2D::from_fn(4, 4, |r, c| (r * 4 + c + 1) as f64);
        assert_eq!(pool_features(&m, (2, 2)).unwrap(), vec![3.5, 5.5, 11.5, 13.5]);
    }

    #[test]
    fn grid_too_large() {
        let m = Matrix2D::zeros(2, 3);
        assert!(matches!(pool_features(&m, (3, 1)), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn scaler_standardizes() {
        let feats = vec![vec![1.0, 5.0], vec![3.0, 5.0]];
        let s = FeatureScaler::fit(&feats).unwrap();
        assert_eq!(s.transform(&[1.0, 5.0]).unwrap(), vec![-1.0, 0.0]);
        assert_eq!(s.transform(&[3.0, 6.0]).unwrap(), vec![1.0, 1.0]);
        assert!(s.transform(&[1.0]).is_err());
    }
}

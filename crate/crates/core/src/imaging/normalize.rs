use serde::{Deserialize, Serialize};

use super::GrayImage;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NormalizeConfig {
    pub mean: [f64; 3],
    pub std: [f64; 3],
}

impl Default for NormalizeConfig {
    /// ImageNet channel statistics.
    fn default() -> Self {
        NormalizeConfig {
            mean: [0.485, 0.456, 0.406],
            std: [0.229, 0.224, 0.225],
        }
    }
}

/// Three standardized channels, channel-major (`values[c][r * cols + col]`).
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedImage {
    rows: usize,
    cols: usize,
    channels: [Vec<f64>; 3],
}

impl NormalizedImage {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn channel(&self, c: usize) -> &[f64] {
        &self.channels[c]
    }

    pub fn get(&self, channel: usize, r: usize, c: usize) -> f64 {
        self.channels[channel][r * self.cols + c]
    }
}

/// Replicates the gray channel three times, scales to `[0, 1]` and applies
/// `(v - mean_c) / std_c`.
pub fn normalize(img: &GrayImage, cfg: &NormalizeConfig) -> Result<NormalizedImage> {
    if cfg.std.iter().any(|&s| !s.is_finite() || s <= 0.0) {
        return Err(Error::InvalidConfig("normalization std must be positive".into()));
    }
    let unit: Vec<f64> = img.pixels().iter().map(|&p| p as f64 / 255.0).collect();
    let channels = std::array::from_fn(|c| unit.iter().map(|v| (v - cfg.mean[c]) / cfg.std[c]).collect());
    Ok(NormalizedImage {
        rows: img.rows(),
        cols: img.cols(),
        channels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_stats_scale_only() {
        let cfg = NormalizeConfig {
            mean: [0.0; 3],
            std: [1.0; 3],
        };
        let out = normalize(&GrayImage::filled(1, 1, 255), &cfg).unwrap();
        for c in 0..3 {
            assert_eq!(out.get(c, 0, 0), 1.0);
        }
    }

    #[test]
    fn half_stats() {
        let cfg = NormalizeConfig {
            mean: [0.5; 3],
            std: [0.5; 3],
        };
        let out = normalize(&GrayImage::filled(1, 1, 0), &cfg).unwrap();
        assert_eq!(out.channel(2), &[-1.0]);
    }

    #[test]
    fn affine_inverse_recovers_input() {
        let img = GrayImage::from_fn(4, 5, |r, c| (r * 50 + c * 9) as u8);
        let cfg = NormalizeConfig::default();
        let out = normalize(&img, &cfg).unwrap();
        for c in 0..3 {
            for (v, &p) in out.channel(c).iter().zip(img.pixels()) {
                assert!((v * cfg.std[c] + cfg.mean[c] - p as f64 / 255.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_zero_std() {
        let cfg = NormalizeConfig {
            mean: [0.0; 3],
            std: [1.0, 0.0, 1.0],
        };
        assert!(matches!(
            normalize(&GrayImage::filled(1, 1, 0), &cfg),
            Err(Error::InvalidConfig(_))
        ));
    }
}

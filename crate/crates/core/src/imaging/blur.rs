use serde::{Deserialize, Serialize};

use super::GrayImage;
use crate::error::{Error, Result};
use crate::matrix::Matrix2D;
use crate::util::quantize_u8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaussianConfig {
    pub sigma: f64,
    /// Kernel half-width; `None` uses `ceil(3 * sigma)`.
    pub radius: Option<usize>,
}

impl Default for GaussianConfig {
    fn default() -> Self {
        GaussianConfig {
            sigma: 0.8,
            radius: None,
        }
    }
}

impl GaussianConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "sigma must be positive, got {}",
                self.sigma
            )));
        }
        if self.radius == Some(0) {
            return Err(Error::InvalidConfig("radius must be at least 1".into()));
        }
        Ok(())
    }

    pub fn resolved_radius(&self) -> usize {
        self.radius
            .unwrap_or_else(|| ((3.0 * self.sigma).ceil() as usize).max(1))
    }
}

/// Continuous 2D Gaussian `exp(-(x^2 + y^2) / (2 sigma^2)) / (2 pi sigma^2)`.
pub fn gaussian_density(x: f64, y: f64, sigma: f64) -> f64 {
    let s2 = sigma * sigma;
    (-(x * x + y * y) / (2.0 * s2)).exp() / (2.0 * std::f64::consts::PI * s2)
}

/// `(2r+1)^2` kernel sampled at integer offsets and renormalised to unit sum.
pub fn gaussian_kernel(cfg: &GaussianConfig) -> Result<Matrix2D> {
    cfg.validate()?;
    let r = cfg.resolved_radius() as isize;
    let side = (2 * r + 1) as usize;
    let raw = Matrix2D::from_fn(side, side, |i, j| {
        gaussian_density((j as isize - r) as f64, (i as isize - r) as f64, cfg.sigma)
    });
    let total: f64 = raw.data().iter().sum();
    Ok(Matrix2D::from_fn(side, side, |i, j| raw.get(i, j) / total))
}

/// Normalised 1D factor; its outer product with itself is [`gaussian_kernel`].
pub fn gaussian_kernel_1d(cfg: &GaussianConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let r = cfg.resolved_radius() as isize;
    let raw: Vec<f64> = (-r..=r)
        .map(|x| (-((x * x) as f64) / (2.0 * cfg.sigma * cfg.sigma)).exp())
        .collect();
    let total: f64 = raw.iter().sum();
    Ok(raw.into_iter().map(|v| v / total).collect())
}

/// Separable Gaussian blur with edge replication. Both passes run in f64 and
/// the result is quantized once.
pub fn gaussian_blur(img: &GrayImage, cfg: &GaussianConfig) -> Result<GrayImage> {
    let k = gaussian_kernel_1d(cfg)?;
    let r = (k.len() / 2) as isize;
    let (rows, cols) = (img.rows() as isize, img.cols() as isize);

    let mut horizontal = vec![0.0f64; img.pixels().len()];
    for y in 0..rows {
        for x in 0..cols {
            let mut acc = 0.0;
            for (t, w) in k.iter().enumerate() {
                let sx = (x + t as isize - r).clamp(0, cols - 1);
                acc += w * img.get(y as usize, sx as usize) as f64;
            }
            horizontal[(y * cols + x) as usize] = acc;
        }
    }
    Ok(GrayImage::from_fn(img.rows(), img.cols(), |y, x| {
        let mut acc = 0.0;
        for (t, w) in k.iter().enumerate() {
            let sy = (y as isize + t as isize - r).clamp(0, rows - 1);
            acc += w * horizontal[(sy * cols) as usize + x];
        }
        quantize_u8(acc)
    }))
}

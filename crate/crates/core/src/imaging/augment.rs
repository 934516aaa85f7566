use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{scale_contrast, GrayImage};
use crate::error::{Error, Result};
use crate::util::{quantize_u8, stream_rng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AugmentConfig {
    pub max_rotation_deg: f64,
    pub hflip_prob: f64,
    /// Brightness offset drawn from `±brightness_jitter * 255`.
    pub brightness_jitter: f64,
    /// Contrast factor drawn from `1 ± contrast_jitter`.
    pub contrast_jitter: f64,
    pub seed: u64,
}

impl Default for AugmentConfig {
    fn default() -> Self {
        AugmentConfig {
            max_rotation_deg: 5.0,
            hflip_prob: 0.5,
            brightness_jitter: 0.1,
            contrast_jitter: 0.1,
            seed: 0,
        }
    }
}

impl AugmentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.hflip_prob) {
            return Err(Error::InvalidConfig("hflip_prob must be in [0, 1]".into()));
        }
        if !(self.max_rotation_deg >= 0.0 && self.brightness_jitter >= 0.0 && self.contrast_jitter >= 0.0) {
            return Err(Error::InvalidConfig(
                "max_rotation_deg and jitters must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

pub fn flip_horizontal(img: &GrayImage) -> GrayImage {
    GrayImage::from_fn(img.rows(), img.cols(), |r, c| img.get(r, img.cols() - 1 - c))
}

/// Rotation about the image centre (counter-clockwise for positive angles),
/// bilinear sampling, out-of-frame coordinates clamped to the nearest edge.
pub fn rotate(img: &GrayImage, degrees: f64) -> GrayImage {
    if degrees == 0.0 {
        return img.clone();
    }
    let (sin, cos) = degrees.to_radians().sin_cos();
    let cy = (img.rows() - 1) as f64 / 2.0;
    let cx = (img.cols() - 1) as f64 / 2.0;
    let max_y = (img.rows() - 1) as f64;
    let max_x = (img.cols() - 1) as f64;
    GrayImage::from_fn(img.rows(), img.cols(), |r, c| {
        let dy = r as f64 - cy;
        let dx = c as f64 - cx;
        // inverse mapping: output pixel -> source location
        let sx = (cos * dx - sin * dy + cx).clamp(0.0, max_x);
        let sy = (sin * dx + cos * dy + cy).clamp(0.0, max_y);
        let (x0, y0) = (sx.floor() as usize, sy.floor() as usize);
        let x1 = (x0 + 1).min(img.cols() - 1);
        let y1 = (y0 + 1).min(img.rows() - 1);
        let (fx, fy) = (sx - x0 as f64, sy - y0 as f64);
        let p = |y, x| img.get(y, x) as f64;
        let top = p(y0, x0) + (p(y0, x1) - p(y0, x0)) * fx;
        let bottom = p(y1, x0) + (p(y1, x1) - p(y1, x0)) * fx;
        quantize_u8(top + (bottom - top) * fy)
    })
}

/// Random rotation, horizontal flip, brightness offset and contrast factor,
/// applied in that order. The draws depend only on `(cfg.seed, sample_index)`.
pub fn augment(img: &GrayImage, cfg: &AugmentConfig, sample_index: u64) -> Result<GrayImage> {
    cfg.validate()?;
    let mut rng = stream_rng(cfg.seed, sample_index);
    let mut symmetric = || 2.0 * rng.gen::<f64>() - 1.0;
    let angle = symmetric() * cfg.max_rotation_deg;
    let flip_draw = (symmetric() + 1.0) / 2.0;
    let brightness = symmetric() * cfg.brightness_jitter * 255.0;
    let contrast = 1.0 + symmetric() * cfg.contrast_jitter;

    let mut out = rotate(img, angle);
    if flip_draw < cfg.hflip_prob {
        out = flip_horizontal(&out);
    }
    if brightness != 0.0 {
        out = out.map(|p| quantize_u8(p as f64 + brightness));
    }
    if contrast != 1.0 {
        out = scale_contrast(&out, contrast);
    }
    Ok(out)
}

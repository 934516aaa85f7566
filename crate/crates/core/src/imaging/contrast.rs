use serde::{Deserialize, Serialize};

use super::GrayImage;
use crate::error::{Error, Result};
use crate::util::quantize_u8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContrastMode {
    HistEqThenFactor,
    FactorOnly,
    HistEqOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContrastConfig {
    pub factor: f64,
    pub mode: ContrastMode,
}

impl Default for ContrastConfig {
    fn default() -> Self {
        ContrastConfig {
            factor: 1.8,
            mode: ContrastMode::HistEqThenFactor,
        }
    }
}

impl ContrastConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.factor > 0.0 && self.factor.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "contrast factor must be positive, got {}",
                self.factor
            )));
        }
        Ok(())
    }
}

/// Discrete equalisation `s_k = round(255 * cdf(k))` with the empirical cdf.
pub fn histogram_equalize(img: &GrayImage) -> GrayImage {
    let mut hist = [0u64; 256];
    for &p in img.pixels() {
        hist[p as usize] += 1;
    }
    let total = img.pixels().len() as f64;
    let mut lut = [0u8; 256];
    let mut running = 0u64;
    for (level, count) in hist.iter().enumerate() {
        running += count;
        lut[level] = quantize_u8(255.0 * running as f64 / total);
    }
    img.map(|p| lut[p as usize])
}

/// Linear stretch about the image mean: `mean + factor * (p - mean)`.
pub fn scale_contrast(img: &GrayImage, factor: f64) -> GrayImage {
    let mean = img.mean();
    img.map(|p| quantize_u8(mean + factor * (p as f64 - mean)))
}

pub fn adjust_contrast(img: &GrayImage, cfg: &ContrastConfig) -> Result<GrayImage> {
    cfg.validate()?;
    Ok(match cfg.mode {
        ContrastMode::FactorOnly => scale_contrast(img, cfg.factor),
        ContrastMode::HistEqOnly => histogram_equalize(img),
        ContrastMode::HistEqThenFactor => scale_contrast(&histogram_equalize(img), cfg.factor),
    })
}

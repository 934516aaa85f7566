//! Chest X-ray conditioning: Gaussian blur, histogram equalisation and
//! contrast scaling, augmentation, resizing and channel normalisation.

mod augment;
mod blur;
mod contrast;
pub mod io;
mod normalize;

pub use augment::{augment, flip_horizontal, rotate, AugmentConfig};
pub use blur::{gaussian_blur, gaussian_density, gaussian_kernel, gaussian_kernel_1d, GaussianConfig};
pub use contrast::{adjust_contrast, histogram_equalize, scale_contrast, ContrastConfig, ContrastMode};
pub use normalize::{normalize, NormalizeConfig, NormalizedImage};

use crate::audio::resize_matrix_bilinear;
use crate::error::{Error, Result};
use crate::matrix::Matrix2D;
use crate::util::quantize_u8;

/// 8-bit grayscale image, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    rows: usize,
    cols: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(rows: usize, cols: usize, pixels: Vec<u8>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInput(format!(
                "image dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if pixels.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "image {rows}x{cols} needs {} pixels, got {}",
                rows * cols,
                pixels.len()
            )));
        }
        Ok(GrayImage { rows, cols, pixels })
    }

    pub fn filled(rows: usize, cols: usize, value: u8) -> Self {
        GrayImage::new(rows, cols, vec![value; rows * cols]).expect("positive dimensions")
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        let mut pixels = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                pixels.push(f(r, c));
            }
        }
        GrayImage::new(rows, cols, pixels).expect("positive dimensions")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.pixels[r * self.cols + c]
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn mean(&self) -> f64 {
        self.pixels.iter().map(|&p| p as f64).sum::<f64>() / self.pixels.len() as f64
    }

    pub(crate) fn map(&self, f: impl Fn(u8) -> u8) -> GrayImage {
        GrayImage {
            rows: self.rows,
            cols: self.cols,
            pixels: self.pixels.iter().map(|&p| f(p)).collect(),
        }
    }

    /// Intensities scaled to `[0, 1]`.
    pub fn to_unit_matrix(&self) -> Matrix2D {
        Matrix2D::from_fn(self.rows, self.cols, |r, c| self.get(r, c) as f64 / 255.0)
    }

    /// Quantizes a `[0, 1]` matrix back to 8 bits.
    pub fn from_unit_matrix(m: &Matrix2D) -> GrayImage {
        GrayImage::from_fn(m.rows(), m.cols(), |r, c| quantize_u8(m.get(r, c) * 255.0))
    }
}

/// Corner-aligned bilinear resize with round-half-up quantization.
pub fn resize_bilinear(img: &GrayImage, rows: usize, cols: usize) -> Result<GrayImage> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidInput("target dimensions must be positive".into()));
    }
    if (img.rows, img.cols) == (rows, cols) {
        return Ok(img.clone());
    }
    let src = Matrix2D::from_fn(img.rows, img.cols, |r, c| img.get(r, c) as f64);
    let out = resize_matrix_bilinear(&src, rows, cols);
    Ok(GrayImage::from_fn(rows, cols, |r, c| quantize_u8(out.get(r, c))))
}

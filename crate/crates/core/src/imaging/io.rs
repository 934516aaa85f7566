//! JPEG/PNG decoding to 8-bit gray and PNG encoding.

use std::io::Cursor;
use std::path::Path;

use image::{DynamicImage, ImageFormat};

use super::GrayImage;
use crate::error::{Error, Result};
use crate::util::quantize_u8;

/// Decodes any JPEG or PNG. Colour inputs are converted with
/// `0.299 R + 0.587 G + 0.114 B`; alpha is ignored.
pub fn read_gray(path: &Path) -> Result<GrayImage> {
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let img = image::ImageReader::open(path)?.with_guessed_format()?.decode()?;
    Ok(to_gray(&img))
}

pub fn decode_gray(bytes: &[u8]) -> Result<GrayImage> {
    let img = image::load_from_memory(bytes)?;
    Ok(to_gray(&img))
}

fn to_gray(img: &DynamicImage) -> GrayImage {
    let (w, h) = (img.width() as usize, img.height() as usize);
    if let DynamicImage::ImageLuma8(buf) = img {
        return GrayImage::new(h, w, buf.as_raw().clone()).expect("decoder dimensions");
    }
    let rgb = img.to_rgb8();
    let pixels = rgb
        .pixels()
        .map(|p| {
            let [r, g, b] = p.0;
            quantize_u8(0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64)
        })
        .collect();
    GrayImage::new(h, w, pixels).expect("decoder dimensions")
}

pub fn encode_png(img: &GrayImage) -> Result<Vec<u8>> {
    let buf = image::GrayImage::from_raw(img.cols() as u32, img.rows() as u32, img.pixels().to_vec())
        .ok_or_else(|| Error::InvalidInput("pixel buffer does not match dimensions".into()))?;
    let mut out = Cursor::new(Vec::new());
    buf.write_to(&mut out, ImageFormat::Png)?;
    Ok(out.into_inner())
}

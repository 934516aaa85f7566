use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::AudioClip;
use crate::error::{Error, Result};
use crate::matrix::Matrix2D;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowKind {
    Rectangular,
    Hann,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StftConfig {
    pub window_len: usize,
    pub hop_len: usize,
    pub window_kind: WindowKind,
    pub fft_len: usize,
}

impl Default for StftConfig {
    fn default() -> Self {
        StftConfig {
            window_len: 256,
            hop_len: 128,
            window_kind: WindowKind::Hann,
            fft_len: 256,
        }
    }
}

impl StftConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window_len == 0 || self.hop_len == 0 {
            return Err(Error::InvalidConfig("window_len and hop_len must be positive".into()));
        }
        if self.hop_len > self.window_len {
            return Err(Error::InvalidConfig(format!(
                "hop_len {} exceeds window_len {}",
                self.hop_len, self.window_len
            )));
        }
        if self.fft_len < self.window_len || !self.fft_len.is_power_of_two() {
            return Err(Error::InvalidConfig(format!(
                "fft_len {} must be a power of two >= window_len {}",
                self.fft_len, self.window_len
            )));
        }
        Ok(())
    }

    /// One-sided spectrum height.
    pub fn n_bins(&self) -> usize {
        self.fft_len / 2 + 1
    }

    pub fn n_frames(&self, n_samples: usize) -> usize {
        if n_samples < self.window_len {
            0
        } else {
            (n_samples - self.window_len) / self.hop_len + 1
        }
    }
}

/// Window weights. The Hann window is the symmetric form
/// `0.5 * (1 - cos(2*pi*n / (len - 1)))`; a length-1 window is `[1]`.
pub fn window_weights(kind: WindowKind, len: usize) -> Vec<f64> {
    match kind {
        WindowKind::Rectangular => vec![1.0; len],
        WindowKind::Hann if len == 1 => vec![1.0],
        WindowKind::Hann => {
            let denom = (len - 1) as f64;
            (0..len)
                .map(|n| 0.5 * (1.0 - (2.0 * std::f64::consts::PI * n as f64 / denom).cos()))
                .collect()
        }
    }
}

/// Splits `samples` into windowed frames starting every `hop_len` samples.
/// Trailing samples that do not fill a whole window are dropped.
pub fn frame_and_window(samples: &[f64], cfg: &StftConfig) -> Result<Vec<Vec<f64>>> {
    cfg.validate()?;
    if samples.len() < cfg.window_len {
        return Err(Error::InputTooShort {
            len: samples.len(),
            window: cfg.window_len,
        });
    }
    let window = window_weights(cfg.window_kind, cfg.window_len);
    let frames = (0..cfg.n_frames(samples.len()))
        .map(|i| {
            let start = i * cfg.hop_len;
            samples[start..start + cfg.window_len]
                .iter()
                .zip(&window)
                .map(|(s, w)| s * w)
                .collect()
        })
        .collect();
    Ok(frames)
}

/// Magnitude spectrogram: `fft_len/2 + 1` rows (bin 0 first) by one column per frame.
pub fn stft_magnitude(clip: &AudioClip, cfg: &StftConfig) -> Result<Matrix2D> {
    let frames = frame_and_window(clip.samples(), cfg)?;
    let n_bins = cfg.n_bins();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(cfg.fft_len);
    let mut out = Matrix2D::zeros(n_bins, frames.len());
    let mut buf = vec![Complex::new(0.0, 0.0); cfg.fft_len];
    let mut scratch = vec![Complex::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    for (t, frame) in frames.iter().enumerate() {
        buf.fill(Complex::new(0.0, 0.0));
        for (b, &s) in buf.iter_mut().zip(frame) {
            b.re = s;
        }
        fft.process_with_scratch(&mut buf, &mut scratch);
        for (k, z) in buf.iter().take(n_bins).enumerate() {
            out.set(k, t, z.norm());
        }
    }
    Ok(out)
}

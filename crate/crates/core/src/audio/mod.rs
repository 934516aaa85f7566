//! Heart-sound signals and their 2D representations.

mod gaf;
mod mel;
mod render;
mod stft;
pub mod wav;

pub use gaf::{angular_field, gaf, piecewise_aggregate, GafConfig, GafKind};
pub use mel::{hz_to_mel, mel_filterbank, mel_spectrogram, mel_to_hz, MelConfig, MelFilterbank};
pub use render::{render_representation, resize_matrix_bilinear, DisplayScale};
pub use stft::{frame_and_window, stft_magnitude, window_weights, StftConfig, WindowKind};

use crate::error::{Error, Result};

/// Mono PCM recording.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioClip {
    samples: Vec<f64>,
    sample_rate_hz: u32,
}

impl AudioClip {
    pub fn new(samples: Vec<f64>, sample_rate_hz: u32) -> Result<Self> {
        if sample_rate_hz == 0 {
            return Err(Error::InvalidInput("sample rate must be positive".into()));
        }
        if samples.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidInput("audio contains non-finite samples".into()));
        }
        Ok(AudioClip {
            samples,
            sample_rate_hz,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate_hz(&self) -> u32 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_secs(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz as f64
    }
}

/// Linear-interpolation resampler.
///
/// Output sample `j` sits at time `j / target_rate_hz`; its value interpolates
/// the two neighbouring input samples. The output holds
/// `round(len * target / source)` samples (at least one), so the duration is
/// preserved within one output sample.
pub fn resample(clip: &AudioClip, target_rate_hz: u32) -> Result<AudioClip> {
    if clip.is_empty() {
        return Err(Error::InvalidInput("cannot resample an empty clip".into()));
    }
    if target_rate_hz == 0 {
        return Err(Error::InvalidInput("target sample rate must be positive".into()));
    }
    if target_rate_hz == clip.sample_rate_hz {
        return Ok(clip.clone());
    }
    let src = clip.samples();
    let ratio = clip.sample_rate_hz as f64 / target_rate_hz as f64;
    let out_len = ((src.len() as f64 / ratio).round() as usize).max(1);
    let last = src.len() - 1;
    let out = (0..out_len)
        .map(|j| {
            let pos = j as f64 * ratio;
            let i0 = (pos.floor() as usize).min(last);
            let i1 = (i0 + 1).min(last);
            let frac = (pos - i0 as f64).clamp(0.0, 1.0);
            src[i0] + (src[i1] - src[i0]) * frac
        })
        .collect();
    AudioClip::new(out, target_rate_hz)
}

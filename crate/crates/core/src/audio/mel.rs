use serde::{Deserialize, Serialize};

use super::stft::{stft_magnitude, StftConfig};
use super::AudioClip;
use crate::error::{Error, Result};
use crate::matrix::Matrix2D;

/// HTK mel scale.
pub fn hz_to_mel(hz: f64) -> f64 {
    2595.0 * (1.0 + hz / 700.0).log10()
}

pub fn mel_to_hz(mel: f64) -> f64 {
    700.0 * (10f64.powf(mel / 2595.0) - 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MelConfig {
    pub n_mels: usize,
    pub f_min_hz: f64,
    /// `None` means the Nyquist frequency of the clip being transformed.
    pub f_max_hz: Option<f64>,
    pub stft: StftConfig,
}

impl Default for MelConfig {
    fn default() -> Self {
        MelConfig {
            n_mels: 64,
            f_min_hz: 20.0,
            f_max_hz: None,
            stft: StftConfig::default(),
        }
    }
}

impl MelConfig {
    pub fn resolved_f_max(&self, sample_rate_hz: u32) -> f64 {
        self.f_max_hz.unwrap_or(sample_rate_hz as f64 / 2.0)
    }
}

/// Triangular filters over the one-sided STFT bins, peak weight 1.
#[derive(Debug, Clone, PartialEq)]
pub struct MelFilterbank {
    /// Filter-major: `weights[m]` has one entry per FFT bin.
    pub weights: Vec<Vec<f64>>,
    /// Edge and centre frequencies in Hz; filter `m` spans `edges[m]..edges[m + 2]`
    /// and peaks at `edges[m + 1]`.
    pub edges_hz: Vec<f64>,
}

impl MelFilterbank {
    pub fn n_mels(&self) -> usize {
        self.weights.len()
    }

    pub fn center_hz(&self, m: usize) -> f64 {
        self.edges_hz[m + 1]
    }
}

pub fn mel_filterbank(cfg: &MelConfig, sample_rate_hz: u32) -> Result<MelFilterbank> {
    cfg.stft.validate()?;
    let nyquist = sample_rate_hz as f64 / 2.0;
    let f_max = cfg.resolved_f_max(sample_rate_hz);
    if cfg.n_mels < 2 {
        return Err(Error::InvalidConfig("n_mels must be at least 2".into()));
    }
    if !(cfg.f_min_hz >= 0.0 && cfg.f_min_hz < f_max && f_max <= nyquist) {
        return Err(Error::InvalidConfig(format!(
            "need 0 <= f_min ({}) < f_max ({f_max}) <= nyquist ({nyquist})",
            cfg.f_min_hz
        )));
    }
    let n_bins = cfg.stft.n_bins();
    let bin_hz = sample_rate_hz as f64 / cfg.stft.fft_len as f64;
    let usable = (0..n_bins)
        .map(|k| k as f64 * bin_hz)
        .filter(|&f| f >= cfg.f_min_hz && f <= f_max)
        .count();
    if cfg.n_mels > usable {
        return Err(Error::InvalidConfig(format!(
            "n_mels {} exceeds the {usable} FFT bins inside [{}, {f_max}] Hz",
            cfg.n_mels, cfg.f_min_hz
        )));
    }

    let mel_lo = hz_to_mel(cfg.f_min_hz);
    let mel_hi = hz_to_mel(f_max);
    let step = (mel_hi - mel_lo) / (cfg.n_mels + 1) as f64;
    let edges_hz: Vec<f64> = (0..cfg.n_mels + 2)
        .map(|i| mel_to_hz(mel_lo + step * i as f64))
        .collect();

    let mut weights = Vec::with_capacity(cfg.n_mels);
    for m in 0..cfg.n_mels {
        let (lo, center, hi) = (edges_hz[m], edges_hz[m + 1], edges_hz[m + 2]);
        let row: Vec<f64> = (0..n_bins)
            .map(|k| {
                let f = k as f64 * bin_hz;
                let rising = (f - lo) / (center - lo);
                let falling = (hi - f) / (hi - center);
                rising.min(falling).max(0.0)
            })
            .collect();
        if row.iter().all(|&w| w == 0.0) {
            return Err(Error::InvalidConfig(format!(
                "mel filter {m} ({lo:.1}-{hi:.1} Hz) covers no FFT bin; reduce n_mels or raise fft_len"
            )));
        }
        weights.push(row);
    }
    Ok(MelFilterbank { weights, edges_hz })
}

/// Log-compressed mel power spectrogram, `log(1 + fb . |X|^2)`, shaped `n_mels x frames`.
pub fn mel_spectrogram(clip: &AudioClip, cfg: &MelConfig) -> Result<Matrix2D> {
    let fb = mel_filterbank(cfg, clip.sample_rate_hz())?;
    let spec = stft_magnitude(clip, &cfg.stft)?;
    let frames = spec.cols();
    Ok(Matrix2D::from_fn(fb.n_mels(), frames, |m, t| {
        let energy: f64 = fb.weights[m]
            .iter()
            .enumerate()
            .map(|(k, w)| {
                let mag = spec.get(k, t);
                w * mag * mag
            })
            .sum();
        energy.ln_1p()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn mel_scale_round_trip() {
        for hz in [0.0, 20.0, 700.0, 1000.0, 4000.0] {
            assert!((mel_to_hz(hz_to_mel(hz)) - hz).abs() < 1e-9);
        }
        assert!((hz_to_mel(700.0) - 2595.0 * 2f64.log10()).abs() < 1e-12);
    }

    #[test]
    fn default_filterbank_is_well_formed() {
        let cfg = MelConfig::default();
        let fb = mel_filterbank(&cfg, 8000).unwrap();
        assert_eq!(fb.n_mels(), 64);
        let bin_hz = 8000.0 / 256.0;
        for (m, row) in fb.weights.iter().enumerate() {
            let peak = row.iter().cloned().fold(0.0, f64::max);
            assert!(peak > 0.0 && peak <= 1.0);
            assert!(row.iter().all(|&w| (0.0..=1.0).contains(&w)));
            // unimodal: rises to the peak then falls
            let argmax = row.iter().position(|&w| w == peak).unwrap();
            assert!(row[..=argmax].windows(2).all(|p| p[0] <= p[1]));
            assert!(row[argmax..].windows(2).all(|p| p[0] >= p[1]));
            for (k, &w) in row.iter().enumerate() {
                let f = k as f64 * bin_hz;
                if !(20.0..=4000.0).contains(&f) {
                    assert_eq!(w, 0.0, "filter {m} leaks at {f} Hz");
                }
            }
        }
    }

    #[test]
    fn rejects_too_many_mels() {
        let cfg = MelConfig {
            n_mels: 200,
            ..MelConfig::default()
        };
        assert!(matches!(mel_filterbank(&cfg, 8000), Err(Error::InvalidConfig(_))));
        let cfg = MelConfig {
            n_mels: 1,
            ..MelConfig::default()
        };
        assert!(mel_filterbank(&cfg, 8000).is_err());
        let cfg = MelConfig {
            f_max_hz: Some(5000.0),
            ..MelConfig::default()
        };
        assert!(mel_filterbank(&cfg, 8000).is_err());
    }

    #[test]
    fn zero_audio_is_zero() {
        let clip = AudioClip::new(vec![0.0; 2048], 8000).unwrap();
        let m = mel_spectrogram(&clip, &MelConfig::default()).unwrap();
        assert_eq!(m.rows(), 64);
        assert!(m.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn sine_peaks_at_nearest_center() {
        let cfg = MelConfig {
            n_mels: 16,
            ..MelConfig::default()
        };
        let x: Vec<f64> = (0..4096)
            .map(|i| (2.0 * PI * 1000.0 * i as f64 / 8000.0).sin())
            .collect();
        let clip = AudioClip::new(x, 8000).unwrap();
        let m = mel_spectrogram(&clip, &cfg).unwrap();

        // centres straight from the mel formula
        let lo = 2595.0 * (1.0f64 + 20.0 / 700.0).log10();
        let hi = 2595.0 * (1.0f64 + 4000.0 / 700.0).log10();
        let centers: Vec<f64> = (1..=16)
            .map(|i| 700.0 * (10f64.powf((lo + (hi - lo) * i as f64 / 17.0) / 2595.0) - 1.0))
            .collect();
        let nearest = (0..16)
            .min_by(|&a, &b| {
                (centers[a] - 1000.0)
                    .abs()
                    .partial_cmp(&(centers[b] - 1000.0).abs())
                    .unwrap()
            })
            .unwrap();
        for t in 0..m.cols() {
            let col: Vec<f64> = (0..16).map(|r| m.get(r, t)).collect();
            let argmax = (0..16).max_by(|&a, &b| col[a].partial_cmp(&col[b]).unwrap()).unwrap();
            assert_eq!(argmax, nearest, "frame {t}");
        }
    }
}

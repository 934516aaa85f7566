//! Named audio-to-2D transforms selectable at runtime.

use std::collections::BTreeMap;

use crate::audio::{gaf, mel_spectrogram, stft_magnitude, AudioClip, DisplayScale, GafConfig, MelConfig, StftConfig};
use crate::error::{Error, Result};
use crate::matrix::Matrix2D;

pub trait Representation: Send + Sync {
    fn name(&self) -> &'static str;

    fn compute(&self, clip: &AudioClip) -> Result<Matrix2D>;

    /// Scale used when the matrix is rendered as an image.
    fn display_scale(&self) -> DisplayScale;
}

pub struct StftRepresentation(pub StftConfig);

impl Representation for StftRepresentation {
    fn name(&self) -> &'static str {
        "stft"
    }

    fn compute(&self, clip: &AudioClip) -> Result<Matrix2D> {
        stft_magnitude(clip, &self.0)
    }

    fn display_scale(&self) -> DisplayScale {
        DisplayScale::Log1p
    }
}

pub struct MelRepresentation(pub MelConfig);

impl Representation for MelRepresentation {
    fn name(&self) -> &'static str {
        "mel"
    }

    fn compute(&self, clip: &AudioClip) -> Result<Matrix2D> {
        mel_spectrogram(clip, &self.0)
    }

    // already log-compressed
    fn display_scale(&self) -> DisplayScale {
        DisplayScale::Linear
    }
}

pub struct GafRepresentation(pub GafConfig);

impl Representation for GafRepresentation {
    fn name(&self) -> &'static str {
        "gaf"
    }

    fn compute(&self, clip: &AudioClip) -> Result<Matrix2D> {
        gaf(clip.samples(), &self.0)
    }

    fn display_scale(&self) -> DisplayScale {
        DisplayScale::Linear
    }
}

pub struct RepresentationRegistry {
    entries: BTreeMap<&'static str, Box<dyn Representation>>,
}

impl RepresentationRegistry {
    pub fn empty() -> Self {
        RepresentationRegistry {
            entries: BTreeMap::new(),
        }
    }

    pub fn with_defaults(stft: StftConfig, mel: MelConfig, gaf: GafConfig) -> Self {
        let mut r = Self::empty();
        r.register(Box::new(StftRepresentation(stft)));
        r.register(Box::new(MelRepresentation(mel)));
        r.register(Box::new(GafRepresentation(gaf)));
        r
    }

    pub fn register(&mut self, rep: Box<dyn Representation>) {
        self.entries.insert(rep.name(), rep);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Representation> {
        self.entries.get(name).map(|r| r.as_ref()).ok_or_else(|| {
            Error::InvalidConfig(format!(
                "unknown representation {name:?}; available: {}",
                self.names().join(", ")
            ))
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_and_shapes() {
        let reg = RepresentationRegistry::with_defaults(
            StftConfig::default(),
            MelConfig::default(),
            GafConfig {
                output_size: 32,
                ..GafConfig::default()
            },
        );
        assert_eq!(reg.names(), vec!["gaf", "mel", "stft"]);
        let clip = AudioClip::new((0..1024).map(|i| (i as f64 * 0.3).sin()).collect(), 8000).unwrap();
        assert_eq!(reg.get("stft").unwrap().compute(&clip).unwrap().shape(), (129, 7));
        assert_eq!(reg.get("mel").unwrap().compute(&clip).unwrap().shape(), (64, 7));
        assert_eq!(reg.get("gaf").unwrap().compute(&clip).unwrap().shape(), (32, 32));
        assert!(matches!(reg.get("cwt"), Err(Error::InvalidConfig(_))));
    }
}

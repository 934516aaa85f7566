//! Pipeline configuration file (TOML). Every section is optional and falls
//! back to defaults; unknown keys are rejected.

use std::path::{Path, PathBuf};

use cardiofuse::audio::{GafConfig, MelConfig, StftConfig};
use cardiofuse::dataset::{SplitConfig, Vocabulary};
use cardiofuse::fusion::FusionRegistry;
use cardiofuse::imaging::{AugmentConfig, ContrastConfig, GaussianConfig};
use cardiofuse::model::TrainConfig;
use cardiofuse::representation::RepresentationRegistry;
use serde::{Deserialize, Serialize};

use crate::failure::Failure;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub dataset: DatasetSection,
    pub audio: AudioSection,
    pub stft: StftConfig,
    pub mel: MelSection,
    pub gaf: GafConfig,
    pub render: RenderSection,
    pub gaussian: GaussianConfig,
    pub contrast: ContrastConfig,
    pub augment: AugmentConfig,
    pub preprocess: PreprocessSection,
    pub features: FeatureSection,
    pub split: SplitConfig,
    pub train: TrainConfig,
    pub fusion: FusionSection,
    pub paths: PathsSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VocabularySpec {
    Preset(String),
    Classes(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DatasetSection {
    /// `"zchsound"`, `"dicom"`, or an explicit list of class names.
    pub vocabulary: VocabularySpec,
}

impl Default for DatasetSection {
    fn default() -> Self {
        DatasetSection {
            vocabulary: VocabularySpec::Preset("zchsound".into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AudioSection {
    /// Clips are resampled to this rate before any transform; 0 keeps the native rate.
    pub target_rate_hz: u32,
}

impl Default for AudioSection {
    fn default() -> Self {
        AudioSection { target_rate_hz: 8000 }
    }
}

/// Mel parameters; the underlying STFT comes from the `[stft]` section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MelSection {
    pub n_mels: usize,
    pub f_min_hz: f64,
    pub f_max_hz: Option<f64>,
}

impl Default for MelSection {
    fn default() -> Self {
        let d = MelConfig::default();
        MelSection {
            n_mels: d.n_mels,
            f_min_hz: d.f_min_hz,
            f_max_hz: d.f_max_hz,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RenderSection {
    pub png: bool,
    /// `[rows, cols]`; absent keeps the matrix size.
    pub size: Option<[usize; 2]>,
}

impl Default for RenderSection {
    fn default() -> Self {
        RenderSection { png: true, size: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PreprocessSection {
    pub output_size: [usize; 2],
}

impl Default for PreprocessSection {
    fn default() -> Self {
        PreprocessSection {
            output_size: [224, 224],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FeatureSection {
    pub grid: [usize; 2],
}

impl Default for FeatureSection {
    fn default() -> Self {
        FeatureSection { grid: [8, 8] }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FusionSection {
    /// Training settings for the meta-learner.
    pub meta: TrainConfig,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PathsSection {
    pub manifest: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

impl PipelineConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, Failure> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| Failure::config(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always serialisable")
    }

    /// One seed drives splitting, augmentation and both trainers.
    pub fn apply_seed(&mut self, seed: u64) {
        self.split.seed = seed;
        self.augment.seed = seed;
        self.train.seed = seed;
        self.fusion.meta.seed = seed;
    }

    pub fn vocabulary(&self) -> Result<Vocabulary, Failure> {
        match &self.dataset.vocabulary {
            VocabularySpec::Preset(name) => {
                Vocabulary::preset(name).ok_or_else(|| Failure::config(format!("unknown vocabulary preset {name:?}")))
            }
            VocabularySpec::Classes(names) => Vocabulary::new(names.clone()).map_err(Failure::from),
        }
    }

    pub fn mel_config(&self) -> MelConfig {
        MelConfig {
            n_mels: self.mel.n_mels,
            f_min_hz: self.mel.f_min_hz,
            f_max_hz: self.mel.f_max_hz,
            stft: self.stft.clone(),
        }
    }

    pub fn representations(&self) -> RepresentationRegistry {
        RepresentationRegistry::with_defaults(self.stft.clone(), self.mel_config(), self.gaf.clone())
    }

    pub fn fusion_schemes(&self) -> FusionRegistry {
        FusionRegistry::with_defaults(self.fusion.meta.clone())
    }

    /// Checks every section that has invariants of its own.
    pub fn validate(&self) -> Result<(), Failure> {
        self.vocabulary()?;
        self.stft.validate()?;
        self.gaussian.validate()?;
        self.contrast.validate()?;
        self.augment.validate()?;
        self.train.validate()?;
        self.fusion.meta.validate()?;
        if self.mel.n_mels == 0
            || !self.mel.f_min_hz.is_finite()
            || self.mel.f_min_hz < 0.0
            || self.mel.f_max_hz.is_some_and(|f| f <= self.mel.f_min_hz)
        {
            return Err(Failure::config("mel needs n_mels > 0 and 0 <= f_min_hz < f_max_hz"));
        }
        if !(self.split.train_fraction > 0.0 && self.split.train_fraction < 1.0) {
            return Err(Failure::config("split.train_fraction must be in (0, 1)"));
        }
        if self.gaf.output_size == 0 {
            return Err(Failure::config("gaf.output_size must be positive"));
        }
        if self.features.grid.contains(&0) || self.preprocess.output_size.contains(&0) {
            return Err(Failure::config("grid and output sizes must be positive"));
        }
        if self.render.size.is_some_and(|s| s.contains(&0)) {
            return Err(Failure::config("render.size must be positive"));
        }
        Ok(())
    }
}

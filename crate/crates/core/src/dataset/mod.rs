//! Manifest-driven dataset handling: class vocabularies, sample records,
//! seeded stratified splitting and prediction CSV exchange.

mod labels;
mod manifest;
mod predictions;
mod split;

pub use labels::{load_labels_csv, read_labels, LabelRow};
pub use manifest::{load_manifest, read_manifest, write_manifest, ManifestRecord, Modality, Split};
pub use predictions::{load_predictions_csv, read_predictions, write_predictions, PredictionRow};
pub use split::{stratified_split, SplitConfig};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassLabel {
    pub id: usize,
    pub name: String,
}

/// Ordered class names; ids are positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    names: Vec<String>,
}

impl Vocabulary {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::InvalidConfig("vocabulary needs at least one class".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || n.contains(',') {
                return Err(Error::InvalidConfig(format!("invalid class name {n:?}")));
            }
            if names[..i].contains(n) {
                return Err(Error::InvalidConfig(format!("duplicate class name {n:?}")));
            }
        }
        Ok(Vocabulary { names })
    }

    /// Heart-sound classes: control group plus four defects.
    pub fn zchsound() -> Self {
        Vocabulary::new(["Normal", "ASD", "VSD", "PDA", "PFO"]).expect("static vocabulary")
    }

    /// Chest X-ray classes.
    pub fn dicom() -> Self {
        Vocabulary::new(["Normal", "ASD", "VSD", "PDA"]).expect("static vocabulary")
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "zchsound" => Some(Self::zchsound()),
            "dicom" => Some(Self::dicom()),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn label(&self, name: &str) -> Option<ClassLabel> {
        self.names.iter().position(|n| n == name).map(|id| ClassLabel {
            id,
            name: self.names[id].clone(),
        })
    }

    pub fn by_id(&self, id: usize) -> Option<ClassLabel> {
        self.names.get(id).map(|n| ClassLabel { id, name: n.clone() })
    }

    /// Accepts a class name or an integer class id.
    pub fn parse_label(&self, text: &str) -> Option<usize> {
        self.label(text)
            .map(|l| l.id)
            .or_else(|| text.parse::<usize>().ok().filter(|&id| id < self.len()))
    }
}

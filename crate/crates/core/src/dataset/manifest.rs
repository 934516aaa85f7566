use std::collections::HashSet;
use std::fmt;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{ClassLabel, Vocabulary};
use crate::error::{Error, Result};

pub const MANIFEST_HEADER: [&str; 5] = ["sample_id", "path", "modality", "label", "split"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Modality {
    Audio,
    Image,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Split {
    Train,
    Val,
    Unassigned,
}

impl fmt::Display for Modality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Modality::Audio => "audio",
            Modality::Image => "image",
        })
    }
}

impl FromStr for Modality {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "audio" => Ok(Modality::Audio),
            "image" => Ok(Modality::Image),
            other => Err(format!("unknown modality {other:?}")),
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Unassigned => "",
        })
    }
}

impl FromStr for Split {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "train" => Ok(Split::Train),
            "val" => Ok(Split::Val),
            "" | "unassigned" => Ok(Split::Unassigned),
            other => Err(format!("unknown split {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestRecord {
    pub sample_id: String,
    /// As written in the manifest; relative paths resolve against the manifest's directory.
    pub path: String,
    pub modality: Modality,
    pub label: ClassLabel,
    pub split: Split,
}

impl ManifestRecord {
    pub fn resolve_path(&self, base_dir: &Path) -> PathBuf {
        let p = Path::new(&self.path);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            base_dir.join(p)
        }
    }
}

/// Reads a manifest file. Sample files are not touched here; a missing sample
/// is reported by whichever stage tries to read it.
pub fn load_manifest(path: &Path, vocab: &Vocabulary) -> Result<Vec<ManifestRecord>> {
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    read_manifest(std::fs::File::open(path)?, vocab)
}

pub fn read_manifest<R: Read>(reader: R, vocab: &Vocabulary) -> Result<Vec<ManifestRecord>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header = rdr.headers().map_err(|e| Error::Parse {
        line: 1,
        message: e.to_string(),
    })?;
    if header.iter().collect::<Vec<_>>() != MANIFEST_HEADER {
        return Err(Error::HeaderMismatch {
            expected: MANIFEST_HEADER.join(","),
            found: header.iter().collect::<Vec<_>>().join(","),
        });
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        let parse_err = |message: String| Error::Parse { line, message };
        let sample_id = row[0].to_string();
        if sample_id.is_empty() {
            return Err(parse_err("empty sample_id".into()));
        }
        let modality = row[2].parse::<Modality>().map_err(parse_err)?;
        let label = vocab.label(&row[3]).ok_or_else(|| Error::UnknownLabel {
            label: row[3].to_string(),
            line,
        })?;
        let split = row[4].parse::<Split>().map_err(parse_err)?;
        if !seen.insert(sample_id.clone()) {
            return Err(Error::DuplicateId { id: sample_id, line });
        }
        out.push(ManifestRecord {
            sample_id,
            path: row[1].to_string(),
            modality,
            label,
            split,
        });
    }
    Ok(out)
}

pub fn write_manifest<W: Write>(writer: W, records: &[ManifestRecord]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    w.write_record(MANIFEST_HEADER)?;
    for r in records {
        w.write_record([
            r.sample_id.as_str(),
            r.path.as_str(),
            &r.modality.to_string(),
            r.label.name.as_str(),
            &r.split.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

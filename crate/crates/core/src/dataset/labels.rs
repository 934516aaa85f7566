//! Ground-truth CSV: `sample_id,label`, label as class name or integer id.

use std::collections::HashSet;
use std::io::Read;
use std::path::Path;

use super::Vocabulary;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelRow {
    pub sample_id: String,
    pub label: usize,
}

pub fn load_labels_csv(path: &Path, vocab: &Vocabulary) -> Result<Vec<LabelRow>> {
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    read_labels(std::fs::File::open(path)?, vocab)
}

pub fn read_labels<R: Read>(reader: R, vocab: &Vocabulary) -> Result<Vec<LabelRow>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header != ["sample_id", "label"] {
        return Err(Error::HeaderMismatch {
            expected: "sample_id,label".into(),
            found: header.join(","),
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
        let sample_id = row[0].to_string();
        if !seen.insert(sample_id.clone()) {
            return Err(Error::DuplicateId { id: sample_id, line });
        }
        let label = vocab.parse_label(&row[1]).ok_or_else(|| Error::UnknownLabel {
            label: row[1].to_string(),
            line,
        })?;
        out.push(LabelRow { sample_id, label });
    }
    Ok(out)
}

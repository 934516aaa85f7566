use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("input too short: {len} samples, window needs {window}")]
    InputTooShort { len: usize, window: usize },

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("degenerate series: all values equal, min-max scaling undefined")]
    DegenerateSeries,

    #[error("training diverged at epoch {epoch}: non-finite loss (learning rate too high?)")]
    Divergence { epoch: usize },

    #[error("invalid fusion weights: {0}")]
    InvalidWeights(String),

    #[error("missing file: {}", .0.display())]
    MissingFile(PathBuf),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("duplicate sample_id {id:?} at line {line}")]
    DuplicateId { id: String, line: usize },

    #[error("unknown label {label:?} at line {line}")]
    UnknownLabel { label: String, line: usize },

    #[error("class {class:?} has fewer than 2 records, cannot stratify")]
    InsufficientClassSamples { class: String },

    #[error("header mismatch: expected {expected:?}, found {found:?}")]
    HeaderMismatch { expected: String, found: String },

    #[error("probabilities for sample {sample_id:?} sum to {sum}, outside tolerance")]
    RowSumError { sample_id: String, sum: f64 },

    #[error("alignment error: {0}")]
    Alignment(String),

    #[error("malformed {format} data: {message}")]
    Format { format: &'static str, message: String },

    #[error("wav: {0}")]
    Wav(#[from] hound::Error),

    #[error("image: {0}")]
    Image(#[from] image::ImageError),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn format(format: &'static str, message: impl Into<String>) -> Self {
        Error::Format {
            format,
            message: message.into(),
        }
    }
}

use std::path::PathBuf;

use cardiofuse::dataset::{write_predictions, PredictionRow};
use cardiofuse::fusion::ProbVector;
use cardiofuse::model::{predict_proba, read_cfs};
use clap::Args;

use super::train::{ModelCard, MODEL_CARD, MODEL_FILE};
use crate::failure::{ensure_dir, write_atomic, Failure};
use crate::pipeline::{par_map, read_sorted_manifest, record_features, summarize, FeatureSource};

#[derive(Args, Debug)]
pub struct PredictArgs {
    /// Directory written by `train`.
    #[arg(long)]
    model: PathBuf,
    /// Manifest CSV of the records to score.
    #[arg(long)]
    manifest: PathBuf,
    /// Directory of precomputed matrices from `transform` (audio only).
    #[arg(long)]
    matrices: Option<PathBuf>,
    /// Prediction CSV to write.
    #[arg(long)]
    out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
}

pub fn run(args: PredictArgs) -> Result<(), Failure> {
    let card = ModelCard::load(&args.model.join(MODEL_CARD))?;
    let model_path = args.model.join(MODEL_FILE);
    let file = std::fs::File::open(&model_path).map_err(|e| Failure::data(format!("{}: {e}", model_path.display())))?;
    let params = read_cfs(std::io::BufReader::new(file))?;
    let vocab = card.vocabulary()?;
    let cfg = &card.pipeline;
    let manifest = read_sorted_manifest(&args.manifest, &vocab)?;

    let registry = cfg.representations();
    let source = match &card.representation {
        Some(name) => FeatureSource::Audio {
            representation: registry.get(name)?,
            matrices: args.matrices.as_deref(),
        },
        None => FeatureSource::Image,
    };
    let outcomes = par_map(args.workers, &manifest.records, |record| {
        let x = record_features(record, &manifest.base_dir, cfg, source, false)?;
        let probs = predict_proba(&params, &card.scaler.transform(&x)?)?;
        Ok(PredictionRow {
            sample_id: record.sample_id.clone(),
            label: record.label.id,
            probs: ProbVector::new(probs)?,
        })
    })?;
    summarize(&manifest.records, &outcomes, |row| {
        vocab
            .by_id(row.probs.predicted_class())
            .map(|l| l.name)
            .unwrap_or_default()
    })?;
    let rows: Vec<PredictionRow> = outcomes.into_iter().map(|r| r.expect("checked above")).collect();
    let mut csv = Vec::new();
    write_predictions(&mut csv, &vocab, &rows)?;
    if let Some(dir) = args.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        ensure_dir(dir)?;
    }
    write_atomic(&args.out, &csv)
}

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use cardiofuse::dataset::{stratified_split, write_manifest, Modality, PredictionRow, Split, Vocabulary};
use cardiofuse::fusion::ProbVector;
use cardiofuse::model::{predict_proba, train_softmax, write_cfs, FeatureScaler, TrainLog};
use clap::Args;
use serde::{Deserialize, Serialize};

use super::{prepare_out_dir, resolve_path};
use crate::config::{PathsSection, PipelineConfig};
use crate::failure::{write_atomic, Failure};
use crate::pipeline::{par_map, read_sorted_manifest, record_features, summarize, FeatureSource};
use crate::CommonArgs;

pub const MODEL_FILE: &str = "model.cfs";
pub const MODEL_CARD: &str = "model.json";
pub const TRAINING_LOG: &str = "training_log.csv";
pub const VAL_PREDICTIONS: &str = "val_predictions.csv";
pub const SPLIT_MANIFEST: &str = "split_manifest.csv";

#[derive(Args, Debug)]
pub struct TrainArgs {
    /// Manifest CSV; records without a split are assigned one first.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Representation for audio records: stft, mel or gaf.
    #[arg(long)]
    representation: Option<String>,
    /// Directory of precomputed matrices from `transform` (audio only).
    #[arg(long)]
    matrices: Option<PathBuf>,
    /// Output directory for the model and its logs.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    common: CommonArgs,
}

/// Everything needed besides the weights to apply a model to new records.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelCard {
    pub class_names: Vec<String>,
    pub modality: Modality,
    pub representation: Option<String>,
    pub scaler: FeatureScaler,
    pub pipeline: PipelineConfig,
    pub log: TrainLog,
}

impl ModelCard {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::data(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
    }

    pub fn vocabulary(&self) -> Result<Vocabulary, Failure> {
        Ok(Vocabulary::new(self.class_names.clone())?)
    }
}

fn single_modality(records: &[cardiofuse::dataset::ManifestRecord]) -> Result<Modality, Failure> {
    let first = records
        .first()
        .ok_or_else(|| Failure::data("manifest has no records"))?
        .modality;
    if records.iter().any(|r| r.modality != first) {
        return Err(Failure::config(
            "manifest mixes audio and image records; train one modality at a time",
        ));
    }
    Ok(first)
}

fn training_log_csv(log: &TrainLog) -> String {
    let mut s = String::from("epoch,train_loss,val_accuracy\n");
    for e in &log.epochs {
        let _ = writeln!(s, "{},{},{}", e.epoch, e.train_loss, e.val_accuracy);
    }
    s
}

pub fn run(args: TrainArgs) -> Result<(), Failure> {
    let mut cfg = args.common.load_config()?;
    let manifest_path = resolve_path(args.manifest, &cfg.paths.manifest, "manifest")?;
    let out = resolve_path(args.out, &cfg.paths.out, "output directory")?;
    cfg.paths.manifest = Some(manifest_path.clone());
    cfg.paths.out = Some(out.clone());
    let vocab = cfg.vocabulary()?;
    let mut manifest = read_sorted_manifest(&manifest_path, &vocab)?;
    let modality = single_modality(&manifest.records)?;
    if manifest.records.iter().any(|r| r.split == Split::Unassigned) {
        manifest.records = stratified_split(&manifest.records, &cfg.split)?;
    }

    let registry = cfg.representations();
    let source = match modality {
        Modality::Audio => {
            let name = args
                .representation
                .as_deref()
                .ok_or_else(|| Failure::config("audio records need --representation"))?;
            FeatureSource::Audio {
                representation: registry.get(name)?,
                matrices: args.matrices.as_deref(),
            }
        }
        Modality::Image => FeatureSource::Image,
    };
    let representation = match source {
        FeatureSource::Audio { representation, .. } => Some(representation.name().to_string()),
        FeatureSource::Image => None,
    };

    prepare_out_dir(&out, &cfg)?;
    let mut split_csv = Vec::new();
    write_manifest(&mut split_csv, &manifest.records)?;
    write_atomic(&out.join(SPLIT_MANIFEST), &split_csv)?;

    let features = par_map(args.common.workers, &manifest.records, |record| {
        record_features(record, &manifest.base_dir, &cfg, source, record.split == Split::Train)
    })?;
    if features.iter().any(Result::is_err) {
        return summarize(&manifest.records, &features, |f| format!("{} features", f.len()));
    }
    let features: Vec<Vec<f64>> = features.into_iter().map(|f| f.expect("checked above")).collect();

    let (mut train_x, mut train_y, mut val_x, mut val_y, mut val_ids) = (vec![], vec![], vec![], vec![], vec![]);
    for (record, x) in manifest.records.iter().zip(features) {
        if record.split == Split::Train {
            train_x.push(x);
            train_y.push(record.label.id);
        } else {
            val_x.push(x);
            val_y.push(record.label.id);
            val_ids.push(record.sample_id.clone());
        }
    }
    if train_x.is_empty() || val_x.is_empty() {
        return Err(Failure::data(format!(
            "need both train and val records, got {} train and {} val",
            train_x.len(),
            val_x.len()
        )));
    }
    let scaler = FeatureScaler::fit(&train_x)?;
    let train_x = train_x
        .iter()
        .map(|x| scaler.transform(x))
        .collect::<Result<Vec<_>, _>>()?;
    let val_x = val_x
        .iter()
        .map(|x| scaler.transform(x))
        .collect::<Result<Vec<_>, _>>()?;

    let (params, log) = train_softmax(&train_x, &train_y, &val_x, &val_y, vocab.len(), &cfg.train)?;

    let mut rows = Vec::with_capacity(val_x.len());
    for ((x, &label), sample_id) in val_x.iter().zip(&val_y).zip(val_ids) {
        rows.push(PredictionRow {
            sample_id,
            label,
            probs: ProbVector::new(predict_proba(&params, x)?)?,
        });
    }
    let mut preds_csv = Vec::new();
    cardiofuse::dataset::write_predictions(&mut preds_csv, &vocab, &rows)?;

    let mut model_bytes = Vec::new();
    write_cfs(&params, &mut model_bytes)?;
    let card = ModelCard {
        class_names: vocab.names().to_vec(),
        modality,
        representation,
        scaler,
        pipeline: PipelineConfig {
            paths: PathsSection::default(),
            ..cfg.clone()
        },
        log: log.clone(),
    };
    let card_json = serde_json::to_string_pretty(&card).expect("model card is serialisable");

    write_atomic(&out.join(MODEL_FILE), &model_bytes)?;
    write_atomic(&out.join(MODEL_CARD), card_json.as_bytes())?;
    write_atomic(&out.join(TRAINING_LOG), training_log_csv(&log).as_bytes())?;
    write_atomic(&out.join(VAL_PREDICTIONS), &preds_csv)?;

    println!(
        "trained on {} samples, validated on {}; best epoch {}, last epoch {}{}",
        train_x.len(),
        val_x.len(),
        log.best_epoch,
        log.last_epoch(),
        if log.stopped_early { " (early stop)" } else { "" }
    );
    println!("validation accuracy: {:.4}", log.best_val_accuracy);
    Ok(())
}

use std::path::{Path, PathBuf};

use cardiofuse::dataset::{load_labels_csv, load_predictions_csv, write_predictions, PredictionRow, Vocabulary};
use cardiofuse::fusion::{evaluate, EvalReport, ProbVector};
use cardiofuse::Error;
use clap::Args;
use serde::Serialize;

use super::{file_label, prepare_out_dir, resolve_path};
use crate::failure::{write_atomic, Failure};
use crate::{CommonArgs, ReportFormat};

pub const FUSED_PREDICTIONS: &str = "fused_predictions.csv";
pub const FUSION_WEIGHTS: &str = "fusion_weights.json";

#[derive(Args, Debug)]
pub struct FuseArgs {
    /// Prediction CSV of one base model; repeat once per model.
    #[arg(long = "preds", required = true)]
    preds: Vec<PathBuf>,
    /// Predictions used to fit the fusion weights, one per `--preds` in the
    /// same order (default: the `--preds` files themselves).
    #[arg(long = "val-preds")]
    val_preds: Vec<PathBuf>,
    /// Fusion scheme: accuracy, classf1 or meta.
    #[arg(long, default_value = "accuracy")]
    fusion: String,
    /// Ground-truth CSV (`sample_id,label`) overriding the labels in the prediction files.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    report_format: ReportFormat,
    #[command(flatten)]
    common: CommonArgs,
}

/// Sorts each model's rows by sample id and checks that every model covers
/// the same samples with the same labels.
pub fn align(sources: &[PathBuf], vocab: &Vocabulary) -> Result<Vec<Vec<PredictionRow>>, Failure> {
    let mut models = Vec::with_capacity(sources.len());
    for path in sources {
        let mut rows = load_predictions_csv(path, vocab)?;
        rows.sort_by(|a, b| a.sample_id.cmp(&b.sample_id));
        if let Some(w) = rows.windows(2).find(|w| w[0].sample_id == w[1].sample_id) {
            return Err(Error::Alignment(format!("{} repeats sample {}", path.display(), w[0].sample_id)).into());
        }
        models.push(rows);
    }
    let (first, rest) = models
        .split_first()
        .ok_or_else(|| Failure::config("no prediction files given"))?;
    for (path, rows) in sources[1..].iter().zip(rest) {
        let same_ids = rows.len() == first.len() && rows.iter().zip(first).all(|(a, b)| a.sample_id == b.sample_id);
        if !same_ids {
            return Err(Error::Alignment(format!(
                "{} and {} cover different sample ids",
                sources[0].display(),
                path.display()
            ))
            .into());
        }
        if let Some((a, _)) = rows.iter().zip(first).find(|(a, b)| a.label != b.label) {
            return Err(Error::Alignment(format!(
                "{} and {} disagree on the label of {}",
                sources[0].display(),
                path.display(),
                a.sample_id
            ))
            .into());
        }
    }
    Ok(models)
}

/// Labels for `ids` (sorted), from a ground-truth file when given.
pub fn labels_for(
    ids: &[&str],
    fallback: Vec<usize>,
    labels: Option<&Path>,
    vocab: &Vocabulary,
) -> Result<Vec<usize>, Failure> {
    let Some(path) = labels else {
        return Ok(fallback);
    };
    let mut truth = load_labels_csv(path, vocab)?;
    if truth.len() != ids.len() {
        return Err(Failure::data(format!(
            "mismatched lengths: {} predictions but {} labels in {}",
            ids.len(),
            truth.len(),
            path.display()
        )));
    }
    truth.sort_by(|a, b| a.sample_id.cmp(&b.sample_id));
    if let Some((id, _)) = ids.iter().zip(&truth).find(|(id, t)| **id != t.sample_id) {
        return Err(Error::Alignment(format!("sample {id} has no label in {}", path.display())).into());
    }
    Ok(truth.into_iter().map(|t| t.label).collect())
}

#[derive(Serialize)]
struct ModelReport<'a> {
    source: String,
    report: &'a EvalReport,
}

#[derive(Serialize)]
struct FusionReport<'a> {
    scheme: &'a str,
    models: Vec<ModelReport<'a>>,
    fused: &'a EvalReport,
}

impl FusionReport<'_> {
    fn render_text(&self, class_names: &[String]) -> String {
        let mut s = format!("fusion scheme: {}\n", self.scheme);
        for m in &self.models {
            s.push_str(&format!(
                "model {}: accuracy {:.4}, macro-F1 {:.4}\n",
                m.source, m.report.accuracy, m.report.macro_f1
            ));
        }
        s.push_str("\nfused\n");
        s.push_str(&self.fused.render_text(class_names));
        s
    }
}

pub fn run(args: FuseArgs) -> Result<(), Failure> {
    let mut cfg = args.common.load_config()?;
    let out = resolve_path(args.out, &cfg.paths.out, "output directory")?;
    cfg.paths.out = Some(out.clone());
    let vocab = cfg.vocabulary()?;
    let registry = cfg.fusion_schemes();
    let scheme = registry.get(&args.fusion)?;
    if !args.val_preds.is_empty() && args.val_preds.len() != args.preds.len() {
        return Err(Failure::config(format!(
            "{} --val-preds files for {} --preds files",
            args.val_preds.len(),
            args.preds.len()
        )));
    }

    let models = align(&args.preds, &vocab)?;
    let ids: Vec<&str> = models[0].iter().map(|r| r.sample_id.as_str()).collect();
    let labels = labels_for(
        &ids,
        models[0].iter().map(|r| r.label).collect(),
        args.labels.as_deref(),
        &vocab,
    )?;

    let weights = if args.val_preds.is_empty() {
        let probs: Vec<Vec<ProbVector>> = models
            .iter()
            .map(|m| m.iter().map(|r| r.probs.clone()).collect())
            .collect();
        scheme.fit(&probs, &labels)?
    } else {
        let val = align(&args.val_preds, &vocab)?;
        let probs: Vec<Vec<ProbVector>> = val
            .iter()
            .map(|m| m.iter().map(|r| r.probs.clone()).collect())
            .collect();
        let val_labels: Vec<usize> = val[0].iter().map(|r| r.label).collect();
        scheme.fit(&probs, &val_labels)?
    };

    let mut fused = Vec::with_capacity(ids.len());
    for (i, (&id, &label)) in ids.iter().zip(&labels).enumerate() {
        let sample: Vec<&ProbVector> = models.iter().map(|m| &m[i].probs).collect();
        fused.push(PredictionRow {
            sample_id: id.to_string(),
            label,
            probs: weights.fuse(&sample)?,
        });
    }

    let base_reports = models
        .iter()
        .map(|m| evaluate(&m.iter().map(|r| r.probs.clone()).collect::<Vec<_>>(), &labels))
        .collect::<Result<Vec<_>, _>>()?;
    let fused_report = evaluate(&fused.iter().map(|r| r.probs.clone()).collect::<Vec<_>>(), &labels)?;
    let report = FusionReport {
        scheme: scheme.name(),
        models: args
            .preds
            .iter()
            .zip(&base_reports)
            .map(|(p, r)| ModelReport {
                source: file_label(p),
                report: r,
            })
            .collect(),
        fused: &fused_report,
    };
    let rendered = match args.report_format {
        ReportFormat::Text => report.render_text(vocab.names()),
        ReportFormat::Structured => serde_json::to_string_pretty(&report).expect("report is serialisable") + "\n",
    };

    prepare_out_dir(&out, &cfg)?;
    let mut csv = Vec::new();
    write_predictions(&mut csv, &vocab, &fused)?;
    write_atomic(&out.join(FUSED_PREDICTIONS), &csv)?;
    let weights_json = serde_json::to_string_pretty(&weights).expect("weights are serialisable") + "\n";
    write_atomic(&out.join(FUSION_WEIGHTS), weights_json.as_bytes())?;
    write_atomic(
        &out.join(format!("report.{}", args.report_format.extension())),
        rendered.as_bytes(),
    )?;
    print!("{rendered}");
    Ok(())
}

use std::path::PathBuf;

use cardiofuse::dataset::load_predictions_csv;
use cardiofuse::fusion::{evaluate, ProbVector};
use clap::Args;

use super::fuse::labels_for;
use crate::failure::{ensure_dir, write_atomic, Failure};
use crate::{CommonArgs, ReportFormat};

#[derive(Args, Debug)]
pub struct EvaluateArgs {
    /// Prediction CSV to score.
    #[arg(long)]
    preds: PathBuf,
    /// Ground-truth CSV (`sample_id,label`) overriding the labels in the prediction file.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Also write the report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    report_format: ReportFormat,
    #[command(flatten)]
    common: CommonArgs,
}

pub fn run(args: EvaluateArgs) -> Result<(), Failure> {
    let cfg = args.common.load_config()?;
    let vocab = cfg.vocabulary()?;
    let mut rows = load_predictions_csv(&args.preds, &vocab)?;
    rows.sort_by(|a, b| a.sample_id.cmp(&b.sample_id));
    let ids: Vec<&str> = rows.iter().map(|r| r.sample_id.as_str()).collect();
    let labels = labels_for(
        &ids,
        rows.iter().map(|r| r.label).collect(),
        args.labels.as_deref(),
        &vocab,
    )?;
    let probs: Vec<ProbVector> = rows.iter().map(|r| r.probs.clone()).collect();
    let report = evaluate(&probs, &labels)?;
    let rendered = match args.report_format {
        ReportFormat::Text => report.render_text(vocab.names()),
        ReportFormat::Structured => serde_json::to_string_pretty(&report).expect("report is serialisable") + "\n",
    };
    print!("{rendered}");
    if let Some(out) = &args.out {
        if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
            ensure_dir(dir)?;
        }
        write_atomic(out, rendered.as_bytes())?;
    }
    Ok(())
}

//! `cardiofuse`: transform heart-sound audio, preprocess chest X-ray images, train
//! shallow classifiers, fuse their posteriors and evaluate the results.

mod commands;
mod config;
mod failure;
mod pipeline;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::PipelineConfig;
use crate::failure::Failure;

#[derive(Parser)]
#[command(
    name = "cardiofuse",
    version,
    about = "Multi-representation heart-sound pipeline with late fusion"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Turn audio records into 2D representations (CFM1 matrix + PNG per record).
    Transform(commands::transform::TransformArgs),
    /// Blur, contrast-adjust, resize and (train split only) augment image records.
    Preprocess(commands::preprocess::PreprocessArgs),
    /// Train a softmax classifier on pooled representation features.
    Train(commands::train::TrainArgs),
    /// Apply a trained model to every record of a manifest.
    Predict(commands::predict::PredictArgs),
    /// Combine prediction CSVs of several models into one.
    Fuse(commands::fuse::FuseArgs),
    /// Score a prediction CSV against its labels.
    Evaluate(commands::evaluate::EvaluateArgs),
    /// Write a synthetic two-tone heart-sound dataset with a manifest.
    Synth(commands::synth::SynthArgs),
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Pipeline configuration file (TOML).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Seed for splitting, augmentation and training; overrides the config file.
    #[arg(long, env = "CARDIOFUSE_SEED")]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub workers: Option<usize>,
}

impl CommonArgs {
    pub fn load_config(&self) -> Result<PipelineConfig, Failure> {
        let mut cfg = PipelineConfig::load(self.config.as_deref())?;
        if let Some(seed) = self.seed {
            cfg.apply_seed(seed);
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Text,
    /// JSON.
    Structured,
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Text => "txt",
            ReportFormat::Structured => "json",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Transform(a) => commands::transform::run(a),
        Command::Preprocess(a) => commands::preprocess::run(a),
        Command::Train(a) => commands::train::run(a),
        Command::Predict(a) => commands::predict::run(a),
        Command::Fuse(a) => commands::fuse::run(a),
        Command::Evaluate(a) => commands::evaluate::run(a),
        Command::Synth(a) => commands::synth::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}

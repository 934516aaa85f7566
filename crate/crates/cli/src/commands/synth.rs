use std::path::PathBuf;

use cardiofuse::audio::wav::write_wav_pcm16;
use cardiofuse::dataset::{write_manifest, ManifestRecord, Modality, Split};
use cardiofuse::synthetic::heart_sound;
use clap::Args;

use crate::failure::{ensure_dir, write_atomic, Failure};
use crate::pipeline::par_map;
use crate::CommonArgs;

#[derive(Args, Debug)]
pub struct SynthArgs {
    /// Output directory; receives `manifest.csv` and `wav/`.
    #[arg(long)]
    out: PathBuf,
    /// Clips per class.
    #[arg(long, default_value_t = 30)]
    per_class: usize,
    /// Only the first N classes of the vocabulary (default: all).
    #[arg(long)]
    classes: Option<usize>,
    /// Carrier frequency of the first class; class c uses (c + 1) times this.
    #[arg(long, default_value_t = 300.0)]
    base_hz: f64,
    #[arg(long, default_value_t = 2.0)]
    duration_secs: f64,
    #[arg(long, default_value_t = 8000)]
    sample_rate_hz: u32,
    /// Amplitude of the uniform background noise.
    #[arg(long, default_value_t = 0.2)]
    noise: f64,
    #[command(flatten)]
    common: CommonArgs,
}

pub fn run(args: SynthArgs) -> Result<(), Failure> {
    let cfg = args.common.load_config()?;
    let vocab = cfg.vocabulary()?;
    let n_classes = args.classes.unwrap_or(vocab.len());
    if n_classes == 0 || n_classes > vocab.len() {
        return Err(Failure::config(format!("--classes must be in 1..={}", vocab.len())));
    }
    let seed = args.common.seed.unwrap_or(cfg.train.seed);
    let wav_dir = args.out.join("wav");
    ensure_dir(&wav_dir)?;

    let records: Vec<ManifestRecord> = (0..n_classes)
        .flat_map(|c| (0..args.per_class).map(move |i| (c, i)))
        .map(|(c, i)| ManifestRecord {
            sample_id: format!("c{c}_{i:04}"),
            path: format!("wav/c{c}_{i:04}.wav"),
            modality: Modality::Audio,
            label: vocab.by_id(c).expect("class within vocabulary"),
            split: Split::Unassigned,
        })
        .collect();
    let written = par_map(args.common.workers, &records, |r| {
        let index = (r.label.id * args.per_class) as u64
            + r.sample_id[r.sample_id.len() - 4..]
                .parse::<u64>()
                .expect("numeric suffix");
        let carrier = args.base_hz * (r.label.id + 1) as f64;
        let clip = heart_sound(
            carrier,
            args.duration_secs,
            args.sample_rate_hz,
            args.noise,
            seed,
            index,
        )?;
        write_wav_pcm16(&args.out.join(&r.path), &clip)?;
        Ok::<(), Failure>(())
    })?;
    written.into_iter().collect::<Result<Vec<()>, Failure>>()?;

    let mut csv = Vec::new();
    write_manifest(&mut csv, &records)?;
    write_atomic(&args.out.join("manifest.csv"), &csv)?;
    println!(
        "wrote {} clips in {n_classes} classes to {}",
        records.len(),
        args.out.display()
    );
    Ok(())
}

//! Per-record work shared by the subcommands.

use std::path::{Path, PathBuf};

use cardiofuse::audio::wav::read_wav;
use cardiofuse::audio::{resample, AudioClip};
use cardiofuse::dataset::{load_manifest, ManifestRecord, Modality, Vocabulary};
use cardiofuse::imaging::io::{encode_png, read_gray};
use cardiofuse::imaging::{adjust_contrast, augment, gaussian_blur, resize_bilinear, GrayImage};
use cardiofuse::model::pool_features;
use cardiofuse::representation::Representation;
use cardiofuse::Matrix2D;
use rayon::prelude::*;

use crate::config::PipelineConfig;
use crate::failure::Failure;

pub struct Manifest {
    pub base_dir: PathBuf,
    /// Sorted by `sample_id`.
    pub records: Vec<ManifestRecord>,
}

pub fn read_sorted_manifest(path: &Path, vocab: &Vocabulary) -> Result<Manifest, Failure> {
    let mut records = load_manifest(path, vocab)?;
    records.sort_by(|a, b| a.sample_id.cmp(&b.sample_id));
    let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(Manifest { base_dir, records })
}

/// Runs `f` over `items` on a pool of `workers` threads, keeping input order.
pub fn par_map<T: Sync, R: Send>(
    workers: Option<usize>,
    items: &[T],
    f: impl Fn(&T) -> R + Sync + Send,
) -> Result<Vec<R>, Failure> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| Failure::config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| items.par_iter().map(f).collect()))
}

/// Sample ids become file names, so anything path-like is refused.
pub fn output_stem(sample_id: &str) -> Result<&str, Failure> {
    if sample_id.is_empty() || sample_id.starts_with('.') || sample_id.contains(['/', '\\', '\0']) {
        return Err(Failure::data(format!(
            "sample_id {sample_id:?} cannot be used as a file name"
        )));
    }
    Ok(sample_id)
}

pub fn require_modality(record: &ManifestRecord, modality: Modality) -> Result<(), Failure> {
    if record.modality != modality {
        return Err(Failure::data(format!(
            "expected a {modality} record, found {}",
            record.modality
        )));
    }
    Ok(())
}

pub fn load_clip(record: &ManifestRecord, base_dir: &Path, cfg: &PipelineConfig) -> Result<AudioClip, Failure> {
    let clip = read_wav(&record.resolve_path(base_dir))?;
    let target = cfg.audio.target_rate_hz;
    if target == 0 || target == clip.sample_rate_hz() {
        Ok(clip)
    } else {
        Ok(resample(&clip, target)?)
    }
}

/// Stable per-sample stream index for augmentation, independent of
/// manifest order and composition (FNV-1a of the id).
pub fn augment_index(sample_id: &str) -> u64 {
    sample_id.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Blur, contrast, resize, then augmentation when `augment_as` is given.
pub fn preprocess_image(img: &GrayImage, cfg: &PipelineConfig, augment_as: Option<&str>) -> Result<GrayImage, Failure> {
    let blurred = gaussian_blur(img, &cfg.gaussian)?;
    let contrasted = adjust_contrast(&blurred, &cfg.contrast)?;
    let [rows, cols] = cfg.preprocess.output_size;
    let resized = resize_bilinear(&contrasted, rows, cols)?;
    match augment_as {
        Some(id) => Ok(augment(&resized, &cfg.augment, augment_index(id))?),
        None => Ok(resized),
    }
}

pub fn load_preprocessed(
    record: &ManifestRecord,
    base_dir: &Path,
    cfg: &PipelineConfig,
    augment: bool,
) -> Result<GrayImage, Failure> {
    let img = read_gray(&record.resolve_path(base_dir))?;
    preprocess_image(&img, cfg, augment.then_some(record.sample_id.as_str()))
}

pub fn render_png(m: &Matrix2D) -> Result<Vec<u8>, Failure> {
    Ok(encode_png(&GrayImage::from_unit_matrix(m))?)
}

/// Where a record's 2D input comes from when building features.
#[derive(Clone, Copy)]
pub enum FeatureSource<'a> {
    Audio {
        representation: &'a dyn Representation,
        /// Directory of precomputed `<sample_id>.cfm` matrices.
        matrices: Option<&'a Path>,
    },
    Image,
}

pub fn record_features(
    record: &ManifestRecord,
    base_dir: &Path,
    cfg: &PipelineConfig,
    source: FeatureSource<'_>,
    augment: bool,
) -> Result<Vec<f64>, Failure> {
    let matrix = match source {
        FeatureSource::Audio {
            representation,
            matrices,
        } => {
            require_modality(record, Modality::Audio)?;
            match matrices {
                Some(dir) => {
                    let path = dir.join(format!("{}.cfm", output_stem(&record.sample_id)?));
                    let file =
                        std::fs::File::open(&path).map_err(|e| Failure::data(format!("{}: {e}", path.display())))?;
                    Matrix2D::read_cfm(std::io::BufReader::new(file))?
                }
                None => representation.compute(&load_clip(record, base_dir, cfg)?)?,
            }
        }
        FeatureSource::Image => {
            require_modality(record, Modality::Image)?;
            load_preprocessed(record, base_dir, cfg, augment)?.to_unit_matrix()
        }
    };
    let [gr, gc] = cfg.features.grid;
    Ok(pool_features(&matrix, (gr, gc))?)
}

/// Prints one summary line per record in the given (sorted) order and
/// turns any failures into a single partial-failure error.
pub fn summarize<T>(
    records: &[ManifestRecord],
    outcomes: &[Result<T, Failure>],
    detail: impl Fn(&T) -> String,
) -> Result<(), Failure> {
    let mut failed = Vec::new();
    for (record, outcome) in records.iter().zip(outcomes) {
        match outcome {
            Ok(v) => println!("{}\tok\t{}", record.sample_id, detail(v)),
            Err(e) => {
                println!("{}\tfailed\t{e}", record.sample_id);
                failed.push(record.sample_id.as_str());
            }
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::data(format!(
            "{} of {} records failed: {}",
            failed.len(),
            records.len(),
            failed.join(", ")
        )))
    }
}

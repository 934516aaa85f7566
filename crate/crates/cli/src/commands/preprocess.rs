use std::path::PathBuf;

use cardiofuse::dataset::{Modality, Split};
use cardiofuse::imaging::io::{encode_png, read_gray};
use clap::Args;

use super::{prepare_out_dir, resolve_path};
use crate::failure::{write_atomic, Failure};
use crate::pipeline::{output_stem, par_map, preprocess_image, read_sorted_manifest, require_modality, summarize};
use crate::CommonArgs;

#[derive(Args, Debug)]
pub struct PreprocessArgs {
    /// Manifest CSV listing the image records.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    common: CommonArgs,
}

pub fn run(args: PreprocessArgs) -> Result<(), Failure> {
    let mut cfg = args.common.load_config()?;
    let manifest_path = resolve_path(args.manifest, &cfg.paths.manifest, "manifest")?;
    let out = resolve_path(args.out, &cfg.paths.out, "output directory")?;
    cfg.paths.manifest = Some(manifest_path.clone());
    cfg.paths.out = Some(out.clone());
    let vocab = cfg.vocabulary()?;
    let manifest = read_sorted_manifest(&manifest_path, &vocab)?;
    prepare_out_dir(&out, &cfg)?;

    let outcomes = par_map(args.common.workers, &manifest.records, |record| {
        let stem = output_stem(&record.sample_id)?;
        require_modality(record, Modality::Image)?;
        let img = read_gray(&record.resolve_path(&manifest.base_dir))?;
        let augment_as = (record.split == Split::Train).then_some(record.sample_id.as_str());
        let processed = preprocess_image(&img, &cfg, augment_as)?;
        write_atomic(&out.join(format!("{stem}.png")), &encode_png(&processed)?)?;
        Ok((processed.rows(), processed.cols(), augment_as.is_some()))
    })?;
    summarize(&manifest.records, &outcomes, |(r, c, augmented)| {
        format!("{r}x{c}{}", if *augmented { " augmented" } else { "" })
    })
}

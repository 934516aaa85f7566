use std::path::PathBuf;

use cardiofuse::audio::render_representation;
use cardiofuse::dataset::Modality;
use clap::Args;

use super::{prepare_out_dir, resolve_path};
use crate::failure::{write_atomic, Failure};
use crate::pipeline::{load_clip, output_stem, par_map, read_sorted_manifest, render_png, require_modality, summarize};
use crate::CommonArgs;

#[derive(Args, Debug)]
pub struct TransformArgs {
    /// Manifest CSV listing the audio records.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Representation name: stft, mel or gaf.
    #[arg(long)]
    representation: String,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    common: CommonArgs,
}

pub fn run(args: TransformArgs) -> Result<(), Failure> {
    let mut cfg = args.common.load_config()?;
    let manifest_path = resolve_path(args.manifest, &cfg.paths.manifest, "manifest")?;
    let out = resolve_path(args.out, &cfg.paths.out, "output directory")?;
    cfg.paths.manifest = Some(manifest_path.clone());
    cfg.paths.out = Some(out.clone());
    let registry = cfg.representations();
    let rep = registry.get(&args.representation)?;
    let vocab = cfg.vocabulary()?;
    let manifest = read_sorted_manifest(&manifest_path, &vocab)?;
    prepare_out_dir(&out, &cfg)?;

    let size = cfg.render.size.map(|[r, c]| (r, c));
    let outcomes = par_map(args.common.workers, &manifest.records, |record| {
        let stem = output_stem(&record.sample_id)?;
        require_modality(record, Modality::Audio)?;
        let clip = load_clip(record, &manifest.base_dir, &cfg)?;
        let m = rep.compute(&clip)?;
        write_atomic(&out.join(format!("{stem}.cfm")), &m.to_cfm_bytes())?;
        if cfg.render.png {
            let png = render_png(&render_representation(&m, rep.display_scale(), size))?;
            write_atomic(&out.join(format!("{stem}.png")), &png)?;
        }
        Ok(m.shape())
    })?;
    summarize(&manifest.records, &outcomes, |(r, c)| format!("{} {r}x{c}", rep.name()))
}

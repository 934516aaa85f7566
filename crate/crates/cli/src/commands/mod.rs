pub mod evaluate;
pub mod fuse;
pub mod predict;
pub mod preprocess;
pub mod synth;
pub mod train;
pub mod transform;

use std::path::{Path, PathBuf};

use crate::config::PipelineConfig;
use crate::failure::{ensure_dir, write_atomic, Failure};

pub const EFFECTIVE_CONFIG: &str = "effective_config.toml";

pub fn resolve_path(flag: Option<PathBuf>, from_config: &Option<PathBuf>, what: &str) -> Result<PathBuf, Failure> {
    flag.or_else(|| from_config.clone())
        .ok_or_else(|| Failure::config(format!("no {what} given (flag or [paths] in the config file)")))
}

/// Creates `dir` and records the configuration the run actually used.
pub fn prepare_out_dir(dir: &Path, cfg: &PipelineConfig) -> Result<(), Failure> {
    ensure_dir(dir)?;
    write_atomic(&dir.join(EFFECTIVE_CONFIG), cfg.to_toml().as_bytes())
}

/// `parent/file`, enough to tell models apart without absolute paths.
pub fn file_label(path: &Path) -> String {
    let parts: Vec<_> = path.components().rev().take(2).collect();
    parts
        .iter()
        .rev()
        .map(|c| c.as_os_str().to_string_lossy())
        .collect::<Vec<_>>()
        .join("/")
}

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{ManifestRecord, Split};
use crate::error::{Error, Result};
use crate::util::{round_half_up, stream_rng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplitConfig {
    pub train_fraction: f64,
    pub stratified: bool,
    pub seed: u64,
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig {
            train_fraction: 0.8,
            stratified: true,
            seed: 0,
        }
    }
}

/// Assigns every `Unassigned` record to `Train` or `Val`.
///
/// Each group (a class, or all records when not stratified) is sorted by
/// `sample_id`, shuffled with a generator keyed on `(seed, group)`, and its
/// first `round(train_fraction * n)` members (ties round up) go to `Train`.
/// Records that already carry a split are left as they are.
pub fn stratified_split(records: &[ManifestRecord], cfg: &SplitConfig) -> Result<Vec<ManifestRecord>> {
    if !(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "train_fraction must be in (0, 1), got {}",
            cfg.train_fraction
        )));
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, r) in records.iter().enumerate() {
        if r.split == Split::Unassigned {
            let key = if cfg.stratified { r.label.id } else { 0 };
            groups.entry(key).or_default().push(i);
        }
    }
    let mut out = records.to_vec();
    for (key, mut members) in groups {
        if cfg.stratified && members.len() < 2 {
            return Err(Error::InsufficientClassSamples {
                class: records[members[0]].label.name.clone(),
            });
        }
        members.sort_by(|&a, &b| records[a].sample_id.cmp(&records[b].sample_id));
        members.shuffle(&mut stream_rng(cfg.seed, key as u64));
        let n_train = round_half_up(cfg.train_fraction * members.len() as f64) as usize;
        for (rank, &i) in members.iter().enumerate() {
            out[i].split = if rank < n_train { Split::Train } else { Split::Val };
        }
    }
    Ok(out)
}

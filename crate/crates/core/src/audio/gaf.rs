//! Gramian angular fields.
//!
//! The series is shortened by piecewise aggregate approximation, min-max
//! scaled to `[-1, 1]` and read as angles `phi = arccos(x)`. The summation
//! field is `cos(phi_i + phi_j)`, the difference field `sin(phi_i - phi_j)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix2D;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GafKind {
    Summation,
    Difference,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GafConfig {
    pub output_size: usize,
    pub kind: GafKind,
}

impl Default for GafConfig {
    fn default() -> Self {
        GafConfig {
            output_size: 224,
            kind: GafKind::Summation,
        }
    }
}

/// Mean of `size` contiguous chunks; chunk `i` covers `[i*n/size, (i+1)*n/size)`.
pub fn piecewise_aggregate(series: &[f64], size: usize) -> Result<Vec<f64>> {
    let n = series.len();
    if size == 0 || size > n {
        return Err(Error::InvalidConfig(format!(
            "output_size {size} must be in 1..={n} (series length)"
        )));
    }
    Ok((0..size)
        .map(|i| {
            let (a, b) = (i * n / size, (i + 1) * n / size);
            series[a..b].iter().sum::<f64>() / (b - a) as f64
        })
        .collect())
}

/// Field from values already scaled into `[-1, 1]`.
pub fn angular_field(scaled: &[f64], kind: GafKind) -> Result<Matrix2D> {
    if scaled.is_empty() {
        return Err(Error::InvalidInput("empty series".into()));
    }
    if scaled.iter().any(|v| !(-1.0..=1.0).contains(v)) {
        return Err(Error::InvalidInput("scaled series must lie in [-1, 1]".into()));
    }
    let phi: Vec<f64> = scaled.iter().map(|x| x.acos()).collect();
    let n = phi.len();
    Ok(match kind {
        GafKind::Summation => Matrix2D::from_fn(n, n, |i, j| (phi[i] + phi[j]).cos()),
        GafKind::Difference => Matrix2D::from_fn(n, n, |i, j| (phi[i] - phi[j]).sin()),
    })
}

pub fn gaf(series: &[f64], cfg: &GafConfig) -> Result<Matrix2D> {
    if series.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("series contains non-finite values".into()));
    }
    let reduced = piecewise_aggregate(series, cfg.output_size)?;
    let (lo, hi) = reduced
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
    if hi <= lo {
        return Err(Error::DegenerateSeries);
    }
    let scaled: Vec<f64> = reduced
        .iter()
        .map(|&v| (((v - hi) + (v - lo)) / (hi - lo)).clamp(-1.0, 1.0))
        .collect();
    angular_field(&scaled, cfg.kind)
}

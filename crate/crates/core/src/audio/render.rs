use serde::{Deserialize, Serialize};

use crate::matrix::Matrix2D;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DisplayScale {
    Linear,
    /// `sign(x) * ln(1 + |x|)`; equals `log1p` on the non-negative spectra and
    /// stays finite on signed inputs such as angular fields.
    Log1p,
}

/// Corner-aligned bilinear resize of a real matrix.
pub fn resize_matrix_bilinear(m: &Matrix2D, rows: usize, cols: usize) -> Matrix2D {
    if m.shape() == (rows, cols) {
        return m.clone();
    }
    let rmap = axis_map(m.rows(), rows);
    let cmap = axis_map(m.cols(), cols);
    Matrix2D::from_fn(rows, cols, |r, c| {
        let (r0, r1, fr) = rmap[r];
        let (c0, c1, fc) = cmap[c];
        let top = m.get(r0, c0) + (m.get(r0, c1) - m.get(r0, c0)) * fc;
        let bottom = m.get(r1, c0) + (m.get(r1, c1) - m.get(r1, c0)) * fc;
        top + (bottom - top) * fr
    })
}

/// Source index pair and fraction for each output position. Corners map to
/// corners; a single output sample takes the source centre.
pub(crate) fn axis_map(src: usize, dst: usize) -> Vec<(usize, usize, f64)> {
    (0..dst)
        .map(|i| {
            let pos = if dst == 1 {
                (src - 1) as f64 / 2.0
            } else {
                i as f64 * (src - 1) as f64 / (dst - 1) as f64
            };
            let i0 = (pos.floor() as usize).min(src - 1);
            let i1 = (i0 + 1).min(src - 1);
            (i0, i1, pos - i0 as f64)
        })
        .collect()
}

/// Grayscale image in `[0, 1]`: optional log compression, min-max
/// normalisation, then bilinear resize. A constant matrix renders all-zero.
pub fn render_representation(m: &Matrix2D, scale: DisplayScale, out_size: Option<(usize, usize)>) -> Matrix2D {
    let scaled = match scale {
        DisplayScale::Linear => m.clone(),
        DisplayScale::Log1p => Matrix2D::from_fn(m.rows(), m.cols(), |r, c| {
            let v = m.get(r, c);
            v.signum() * v.abs().ln_1p()
        }),
    };
    let (lo, hi) = scaled.min_max();
    let span = hi - lo;
    let normalized = Matrix2D::from_fn(m.rows(), m.cols(), |r, c| {
        if span > 0.0 {
            (scaled.get(r, c) - lo) / span
        } else {
            0.0
        }
    });
    match out_size {
        Some((rows, cols)) => resize_matrix_bilinear(&normalized, rows, cols),
        None => normalized,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalized_identity_unchanged() {
        let m = Matrix2D::new(2, 2, vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(render_representation(&m, DisplayScale::Linear, Some((2, 2))), m);
        assert_eq!(render_representation(&m, DisplayScale::Linear, None), m);
    }

    #[test]
    fn min_max_midpoint() {
        let m = Matrix2D::new(1, 3, vec![2.0, 4.0, 6.0]).unwrap();
        let out = render_representation(&m, DisplayScale::Linear, None);
        assert_eq!(out.data(), &[0.0, 0.5, 1.0]);
    }

    #[test]
    fn constant_renders_zero() {
        let m = Matrix2D::new(2, 3, vec![7.0; 6]).unwrap();
        let out = render_representation(&m, DisplayScale::Log1p, Some((4, 5)));
        assert_eq!(out.shape(), (4, 5));
        assert!(out.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn log_scale_handles_negative_values() {
        let m = Matrix2D::new(1, 3, vec![-1.0, 0.0, 1.0]).unwrap();
        let out = render_representation(&m, DisplayScale::Log1p, None);
        assert_eq!(out.data(), &[0.0, 0.5, 1.0]);
    }

    #[test]
    fn bilinear_midpoints() {
        let m = Matrix2D::new(2, 2, vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let out = resize_matrix_bilinear(&m, 3, 3);
        assert_eq!(out.get(1, 1), 1.5);
        assert_eq!(out.get(0, 1), 0.5);
        assert_eq!(out.get(2, 2), 3.0);
        let one = resize_matrix_bilinear(&m, 1, 1);
        assert_eq!(one.get(0, 0), 1.5);
    }
}

//! Dense row-major real matrix shared by spectrograms, angular fields,
//! kernels and rendered images, plus its flat binary encoding.

use std::io::{Read, Write};

use crate::error::{Error, Result};

const CFM_MAGIC: &[u8; 4] = b"CFM1";

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix2D {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix2D {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInput(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "matrix {rows}x{cols} needs {} values, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("matrix contains non-finite values".into()));
        }
        Ok(Matrix2D { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Matrix2D {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.data[r * cols + c] = f(r, c);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.data
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    /// Writes `CFM1`, u32 rows, u32 cols, then little-endian f64 values row-major.
    pub fn write_cfm<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(CFM_MAGIC)?;
        w.write_all(&dim_u32(self.rows)?.to_le_bytes())?;
        w.write_all(&dim_u32(self.cols)?.to_le_bytes())?;
        for v in &self.data {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn to_cfm_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::with_capacity(12 + 8 * self.data.len());
        self.write_cfm(&mut buf).expect("writing to a Vec cannot fail");
        buf
    }

    pub fn read_cfm<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != CFM_MAGIC {
            return Err(Error::format("CFM1", format!("bad magic {magic:?}")));
        }
        let rows = read_u32(&mut r)? as usize;
        let cols = read_u32(&mut r)? as usize;
        let mut data = Vec::with_capacity(rows.saturating_mul(cols).min(1 << 24));
        let mut buf = [0u8; 8];
        for _ in 0..rows * cols {
            r.read_exact(&mut buf)?;
            data.push(f64::from_le_bytes(buf));
        }
        let mut rest = [0u8; 1];
        if r.read(&mut rest)? != 0 {
            return Err(Error::format("CFM1", "trailing bytes after matrix payload"));
        }
        Matrix2D::new(rows, cols, data).map_err(|e| Error::format("CFM1", e.to_string()))
    }
}

pub(crate) fn dim_u32(n: usize) -> Result<u32> {
    u32::try_from(n).map_err(|_| Error::InvalidInput(format!("dimension {n} exceeds u32")))
}

pub(crate) fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes() {
        assert!(Matrix2D::new(2, 2, vec![1.0; 3]).is_err());
        assert!(Matrix2D::new(0, 2, vec![]).is_err());
        assert!(Matrix2D::new(1, 1, vec![f64::NAN]).is_err());
    }

    #[test]
    fn cfm_layout_is_exact() {
        let m = Matrix2D::new(1, 2, vec![1.0, -2.5]).unwrap();
        let bytes = m.to_cfm_bytes();
        assert_eq!(&bytes[..4], b"CFM1");
        assert_eq!(&bytes[4..8], &1u32.to_le_bytes());
        assert_eq!(&bytes[8..12], &2u32.to_le_bytes());
        assert_eq!(&bytes[12..20], &1.0f64.to_le_bytes());
        assert_eq!(&bytes[20..28], &(-2.5f64).to_le_bytes());
        assert_eq!(bytes.len(), 28);
        assert_eq!(Matrix2D::read_cfm(&bytes[..]).unwrap(), m);
    }

    #[test]
    fn cfm_rejects_truncation_and_magic() {
        let m = Matrix2D::from_fn(3, 3, |r, c| (r * 3 + c) as f64);
        let bytes = m.to_cfm_bytes();
        assert!(Matrix2D::read_cfm(&bytes[..bytes.len() - 1]).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(Matrix2D::read_cfm(&bad[..]).is_err());
        let mut long = bytes;
        long.push(0);
        assert!(Matrix2D::read_cfm(&long[..]).is_err());
    }
}

//! `CFS1` parameter files: magic, u32 n_classes, u32 n_features, f64 weights
//! row-major, f64 biases, all little-endian.

use std::io::{Read, Write};

use super::SoftmaxParams;
use crate::error::{Error, Result};
use crate::matrix::{dim_u32, read_u32};

const CFS_MAGIC: &[u8; 4] = b"CFS1";

pub fn write_cfs<W: Write>(params: &SoftmaxParams, mut w: W) -> Result<()> {
    w.write_all(CFS_MAGIC)?;
    w.write_all(&dim_u32(params.n_classes())?.to_le_bytes())?;
    w.write_all(&dim_u32(params.n_features())?.to_le_bytes())?;
    for v in params.weights().iter().chain(params.bias()) {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_cfs<R: Read>(mut r: R) -> Result<SoftmaxParams> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != CFS_MAGIC {
        return Err(Error::format("CFS1", format!("bad magic {magic:?}")));
    }
    let k = read_u32(&mut r)? as usize;
    let d = read_u32(&mut r)? as usize;
    let mut read_f64s = |n: usize| -> Result<Vec<f64>> {
        let mut buf = [0u8; 8];
        (0..n)
            .map(|_| {
                r.read_exact(&mut buf)?;
                Ok(f64::from_le_bytes(buf))
            })
            .collect()
    };
    let weights = read_f64s(k * d)?;
    let bias = read_f64s(k)?;
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(Error::format("CFS1", "trailing bytes after parameters"));
    }
    SoftmaxParams::new(k, d, weights, bias).map_err(|e| Error::format("CFS1", e.to_string()))
}

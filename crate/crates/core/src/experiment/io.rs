//! EXLB1 binary grid files.
//!
//! Layout, all integers and floats little endian:
//! magic `EXLB1`, version `u8`, model id as `u16` length plus UTF-8 bytes,
//! side, spacing and margin as `f64`, rows and cols as `u64`, seed and
//! replicate as `u64`, then `rows·cols` values as `f64` in row-major order.

use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, FormatError, Result};
use crate::grid::{FieldSample, GridSpec};

pub const EXLB1_MAGIC: &[u8; 5] = b"EXLB1";
pub const EXLB1_VERSION: u8 = 1;

pub fn encode_exlb1(sample: &FieldSample) -> Vec<u8> {
    let id = sample.model_id.as_bytes();
    let (rows, cols) = sample.values.dim();
    let mut out = Vec::with_capacity(64 + id.len() + 8 * rows * cols);
    out.extend_from_slice(EXLB1_MAGIC);
    out.push(EXLB1_VERSION);
    out.extend_from_slice(&(id.len() as u16).to_le_bytes());
    out.extend_from_slice(id);
    for v in [sample.grid.side(), sample.grid.spacing(), sample.grid.margin()] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for v in [rows as u64, cols as u64, sample.seed, sample.replicate] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for v in sample.values.iter() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], FormatError> {
        let end = self.pos + n;
        if end > self.bytes.len() {
            return Err(FormatError::Truncated { expected: end, found: self.bytes.len() });
        }
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u64(&mut self) -> Result<u64, FormatError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn f64(&mut self) -> Result<f64, FormatError> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
}

pub fn decode_exlb1(bytes: &[u8]) -> Result<FieldSample> {
    let mut r = Reader { bytes, pos: 0 };
    let magic = r.take(EXLB1_MAGIC.len()).map_err(|_| FormatError::BadMagic)?;
    if magic != EXLB1_MAGIC {
        return Err(FormatError::BadMagic.into());
    }
    let version = r.take(1)?[0];
    if version != EXLB1_VERSION {
        return Err(FormatError::UnsupportedVersion(version).into());
    }
    let id_len = u16::from_le_bytes(r.take(2)?.try_into().expect("2 bytes")) as usize;
    let model_id = std::str::from_utf8(r.take(id_len)?).map_err(|_| FormatError::InvalidModelId)?.to_string();
    let (side, spacing, margin) = (r.f64()?, r.f64()?, r.f64()?);
    let (rows, cols) = (r.u64()? as usize, r.u64()? as usize);
    let (seed, replicate) = (r.u64()?, r.u64()?);

    let payload = rows.checked_mul(cols).and_then(|n| n.checked_mul(8)).ok_or(FormatError::DimensionMismatch {
        rows,
        cols,
        expected: 0,
    })?;
    let expected_len = r.pos + payload;
    if bytes.len() < expected_len {
        return Err(FormatError::Truncated { expected: expected_len, found: bytes.len() }.into());
    }
    if bytes.len() > expected_len {
        return Err(FormatError::TrailingBytes.into());
    }
    let grid = GridSpec::new(side, spacing, margin)?;
    let n = grid.points_per_axis();
    if rows != n || cols != n {
        return Err(FormatError::DimensionMismatch { rows, cols, expected: n }.into());
    }
    let mut values = Vec::with_capacity(rows * cols);
    for i in 0..rows * cols {
        let v = r.f64()?;
        if !v.is_finite() {
            return Err(FormatError::NonFiniteValue(i).into());
        }
        values.push(v);
    }
    let values = Array2::from_shape_vec((rows, cols), values).expect("checked shape");
    Ok(FieldSample { grid, values, model_id, seed, replicate })
}

pub fn write_exlb1(path: &Path, sample: &FieldSample) -> Result<()> {
    std::fs::write(path, encode_exlb1(sample)).map_err(Error::from)
}

pub fn read_exlb1(path: &Path) -> Result<FieldSample> {
    decode_exlb1(&std::fs::read(path)?)
}

//! Binary checkpoints of a running realization.
//!
//! Layout: the 8-byte magic `H2CKPT01`, a little-endian `u64` header length,
//! the JSON header, then the `(R, ρ, z)` values as little-endian `f64`
//! (re, im) pairs in row-major order.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use ndarray::Array3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{H2GridSpec, H2Params};
use crate::error::{Error, Result};

const MAGIC: &[u8; 8] = b"H2CKPT01";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointHeader {
    pub format_version: u32,
    pub code_version: String,
    pub params: H2Params,
    pub geometry: H2GridSpec,
    pub geometry_hash: String,
    pub dt: f64,
    pub time: f64,
    pub step: usize,
    /// Index of the first kick not yet applied.
    pub next_kick: usize,
    pub seed: Option<u64>,
    pub absorbed_r: f64,
    /// Records made so far, in the CSV format of `ObservableSeries`.
    pub records_csv: String,
}

impl Default for CheckpointHeader {
    fn default() -> Self {
        Self {
            format_version: 1,
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            params: H2Params::default(),
            geometry: H2GridSpec::default(),
            geometry_hash: String::new(),
            dt: 0.0,
            time: 0.0,
            step: 0,
            next_kick: 0,
            seed: None,
            absorbed_r: 0.0,
            records_csv: String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub header: CheckpointHeader,
    pub values: Array3<Complex64>,
}

/// Writes to a temporary sibling and renames, so a crash never leaves a truncated file.
pub fn write_checkpoint(path: &Path, checkpoint: &Checkpoint) -> Result<()> {
    let json = serde_json::to_vec(&checkpoint.header)
        .map_err(|e| Error::Checkpoint(format!("header: {e}")))?;
    let (nr, nm, nz) = checkpoint.values.dim();
    let g = &checkpoint.header.geometry;
    if (nr, nm, nz) != (g.r_points, g.n_modes, g.z_points) {
        return Err(Error::Checkpoint(
            "values do not match the header geometry".into(),
        ));
    }
    let tmp = path.with_extension("partial");
    {
        let mut out = BufWriter::new(fs::File::create(&tmp)?);
        out.write_all(MAGIC)?;
        out.write_all(&(json.len() as u64).to_le_bytes())?;
        out.write_all(&json)?;
        for c in checkpoint.values.iter() {
            out.write_all(&c.re.to_le_bytes())?;
            out.write_all(&c.im.to_le_bytes())?;
        }
        out.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read_checkpoint(path: &Path) -> Result<Checkpoint> {
    let bytes = fs::read(path)?;
    let bad = |what: &str| Error::Checkpoint(format!("{}: {what}", path.display()));
    if bytes.len() < 16 || &bytes[..8] != MAGIC {
        return Err(bad("not a checkpoint file"));
    }
    let header_len = u64::from_le_bytes(bytes[8..16].try_into().expect("8 bytes")) as usize;
    let body = 16usize
        .checked_add(header_len)
        .filter(|&end| end <= bytes.len())
        .ok_or_else(|| bad("truncated header"))?;
    let header: CheckpointHeader =
        serde_json::from_slice(&bytes[16..body]).map_err(|e| bad(&format!("header: {e}")))?;
    let g = &header.geometry;
    let shape = (g.r_points, g.n_modes, g.z_points);
    let count = shape.0 * shape.1 * shape.2;
    let data = &bytes[body..];
    if data.len() != count * 16 {
        return Err(bad(&format!(
            "expected {count} values, found {} bytes",
            data.len()
        )));
    }
    let values: Vec<Complex64> = data
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[..8].try_into().expect("8 bytes")),
                f64::from_le_bytes(c[8..].try_into().expect("8 bytes")),
            )
        })
        .collect();
    let values = Array3::from_shape_vec(shape, values).map_err(|e| bad(&e.to_string()))?;
    Ok(Checkpoint { header, values })
}

//! Embedding files: a JSON sidecar `<name>.json` describing a raw row-major
//! little-endian f32 payload `<name>.f32le`.

use crate::error::{HullscopeError, Result};
use crate::point_set::PointSet;
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct EmbeddingHeader {
    pub rows: usize,
    pub cols: usize,
    pub dtype: String,
    pub split: String,
    pub source: String,
}

/// Accepts the stem, the `.json` sidecar, or the `.f32le` payload path.
fn companion_paths(path: &Path) -> (PathBuf, PathBuf) {
    (path.with_extension("json"), path.with_extension("f32le"))
}

pub fn load_embeddings(path: &Path) -> Result<PointSet> {
    let (json_path, payload_path) = companion_paths(path);
    let fail = |p: &Path, reason: String| {
        Err(HullscopeError::format(p.display().to_string(), reason))
    };
    let header: EmbeddingHeader = serde_json::from_slice(&fs::read(&json_path)?)
        .map_err(|e| HullscopeError::format(json_path.display().to_string(), e.to_string()))?;
    if header.dtype != "f32le" {
        return fail(&json_path, format!("unsupported dtype `{}`", header.dtype));
    }
    let payload = fs::read(&payload_path)?;
    let expected = header.rows * header.cols * 4;
    if payload.len() != expected {
        return fail(
            &payload_path,
            format!(
                "payload is {} bytes but the sidecar declares {}x{} = {expected}",
                payload.len(),
                header.rows,
                header.cols
            ),
        );
    }
    let values: Vec<f64> = payload
        .chunks_exact(4)
        .map(|b| f32::from_le_bytes(b.try_into().unwrap()) as f64)
        .collect();
    PointSet::from_rows(header.rows, header.cols, values)
}

/// Writes `<stem>.json` and `<stem>.f32le`; values are narrowed to f32.
pub fn write_embeddings(
    stem: &Path,
    x: &PointSet,
    split: &str,
    source: &str,
) -> Result<(PathBuf, PathBuf)> {
    let (json_path, payload_path) = companion_paths(stem);
    let header = EmbeddingHeader {
        rows: x.len(),
        cols: x.dim(),
        dtype: "f32le".into(),
        split: split.into(),
        source: source.into(),
    };
    fs::write(&json_path, serde_json::to_vec_pretty(&header).unwrap())?;
    let mut payload = Vec::with_capacity(x.len() * x.dim() * 4);
    for v in x.as_array().iter() {
        payload.extend((*v as f32).to_le_bytes());
    }
    fs::write(&payload_path, payload)?;
    Ok((json_path, payload_path))
}

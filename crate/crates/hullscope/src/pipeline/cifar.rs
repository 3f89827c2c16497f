//! CIFAR-10 binary batches: 3073-byte records, one label byte followed by
//! 1024 red, 1024 green, and 1024 blue bytes (channel-major 32×32 planes).

use crate::error::{HullscopeError, Result};
use ndarray::{Array4, ArrayView3};
use std::fs;
use std::path::Path;

pub const RECORD_BYTES: usize = 3073;
pub const SIDE: usize = 32;
pub const CHANNELS: usize = 3;

/// Decode one batch file into H×W×C images plus labels.
pub fn load_cifar_batch(path: &Path) -> Result<(Array4<u8>, Vec<u8>)> {
    let bytes = fs::read(path)?;
    if bytes.is_empty() || bytes.len() % RECORD_BYTES != 0 {
        return Err(HullscopeError::format(
            path.display().to_string(),
            format!(
                "file length {} is not a positive multiple of the {RECORD_BYTES}-byte record",
                bytes.len()
            ),
        ));
    }
    let n = bytes.len() / RECORD_BYTES;
    let mut labels = Vec::with_capacity(n);
    let mut images = Array4::<u8>::zeros((n, SIDE, SIDE, CHANNELS));
    for (rec, chunk) in bytes.chunks_exact(RECORD_BYTES).enumerate() {
        labels.push(chunk[0]);
        for c in 0..CHANNELS {
            for h in 0..SIDE {
                for w in 0..SIDE {
                    images[[rec, h, w, c]] = chunk[1 + c * SIDE * SIDE + h * SIDE + w];
                }
            }
        }
    }
    Ok((images, labels))
}

/// Inverse of the record decode; used for round-trip checks and fixtures.
pub fn encode_cifar_record(image: ArrayView3<u8>, label: u8) -> Result<Vec<u8>> {
    if image.dim() != (SIDE, SIDE, CHANNELS) {
        return Err(HullscopeError::dim(format!(
            "CIFAR record must be {SIDE}x{SIDE}x{CHANNELS}, got {:?}",
            image.dim()
        )));
    }
    let mut out = Vec::with_capacity(RECORD_BYTES);
    out.push(label);
    for c in 0..CHANNELS {
        for h in 0..SIDE {
            for w in 0..SIDE {
                out.push(image[[h, w, c]]);
            }
        }
    }
    Ok(out)
}

/// Concatenate several batch files (e.g. the five train batches).
pub fn load_cifar_batches(paths: &[impl AsRef<Path>]) -> Result<(Array4<u8>, Vec<u8>)> {
    if paths.is_empty() {
        return Err(HullscopeError::input("need at least one CIFAR batch file"));
    }
    let mut all_images: Option<Array4<u8>> = None;
    let mut all_labels = Vec::new();
    for p in paths {
        let (images, labels) = load_cifar_batch(p.as_ref())?;
        all_labels.extend(labels);
        all_images = Some(match all_images {
            None => images,
            Some(acc) => ndarray::concatenate(
                ndarray::Axis(0),
                &[acc.view(), images.view()],
            )
            .expect("batch shapes are fixed"),
        });
    }
    Ok((all_images.unwrap(), all_labels))
}

//! IDX binary format (the MNIST distribution format): big-endian magic,
//! big-endian 32-bit dimension sizes, unsigned-byte payload.

use crate::error::{HullscopeError, Result};
use ndarray::Array3;
use std::fs;
use std::io::Write;
use std::path::Path;

pub const MAGIC_LABELS: u32 = 0x0000_0801;
pub const MAGIC_IMAGES: u32 = 0x0000_0803;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdxTensor {
    pub magic: u32,
    pub dims: Vec<usize>,
    pub data: Vec<u8>,
}

pub fn load_idx(path: &Path) -> Result<IdxTensor> {
    let bytes = fs::read(path)?;
    let fail = |reason: String| Err(HullscopeError::format(path.display().to_string(), reason));
    if bytes.len() < 4 {
        return fail("file shorter than the 4-byte magic".into());
    }
    let magic = u32::from_be_bytes(bytes[0..4].try_into().unwrap());
    let ndims = match magic {
        MAGIC_LABELS => 1,
        MAGIC_IMAGES => 3,
        other => return fail(format!("unsupported magic {other:#010x}")),
    };
    let header_len = 4 + 4 * ndims;
    if bytes.len() < header_len {
        return fail(format!(
            "truncated header: need {header_len} bytes, file has {}",
            bytes.len()
        ));
    }
    let dims: Vec<usize> = (0..ndims)
        .map(|i| {
            let off = 4 + 4 * i;
            u32::from_be_bytes(bytes[off..off + 4].try_into().unwrap()) as usize
        })
        .collect();
    let expected: usize = dims.iter().product();
    let payload = &bytes[header_len..];
    if payload.len() != expected {
        return fail(format!(
            "payload length {} does not match declared shape {dims:?} ({expected} bytes)",
            payload.len()
        ));
    }
    Ok(IdxTensor {
        magic,
        dims,
        data: payload.to_vec(),
    })
}

/// 1-D label file (magic 0x00000801).
pub fn load_idx_labels(path: &Path) -> Result<Vec<u8>> {
    let t = load_idx(path)?;
    if t.magic != MAGIC_LABELS {
        return Err(HullscopeError::format(
            path.display().to_string(),
            format!("expected a label file (magic {MAGIC_LABELS:#010x}), got {:#010x}", t.magic),
        ));
    }
    Ok(t.data)
}

/// 3-D image file (magic 0x00000803), rows N×H×W.
pub fn load_idx_images(path: &Path) -> Result<Array3<u8>> {
    let t = load_idx(path)?;
    if t.magic != MAGIC_IMAGES {
        return Err(HullscopeError::format(
            path.display().to_string(),
            format!("expected an image file (magic {MAGIC_IMAGES:#010x}), got {:#010x}", t.magic),
        ));
    }
    let (n, h, w) = (t.dims[0], t.dims[1], t.dims[2]);
    Array3::from_shape_vec((n, h, w), t.data)
        .map_err(|e| HullscopeError::format(path.display().to_string(), e.to_string()))
}

pub fn write_idx_labels(path: &Path, labels: &[u8]) -> Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(&MAGIC_LABELS.to_be_bytes())?;
    f.write_all(&(labels.len() as u32).to_be_bytes())?;
    f.write_all(labels)?;
    Ok(())
}

pub fn write_idx_images(path: &Path, images: &Array3<u8>) -> Result<()> {
    let (n, h, w) = images.dim();
    let mut f = fs::File::create(path)?;
    f.write_all(&MAGIC_IMAGES.to_be_bytes())?;
    for dim in [n, h, w] {
        f.write_all(&(dim as u32).to_be_bytes())?;
    }
    let contiguous;
    let slice = match images.as_slice() {
        Some(s) => s,
        None => {
            contiguous = images.to_owned();
            contiguous.as_slice().unwrap()
        }
    };
    f.write_all(slice)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    #[test]
    fn label_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("labels");
        let labels: Vec<u8> = (0..37).map(|i| i % 10).collect();
        write_idx_labels(&path, &labels).unwrap();
        assert_eq!(load_idx_labels(&path).unwrap(), labels);
        // bit-exact on disk: header then payload
        let raw = fs::read(&path).unwrap();
        assert_eq!(&raw[..8], &[0, 0, 8, 1, 0, 0, 0, 37]);
        assert_eq!(&raw[8..], &labels[..]);
    }

    #[test]
    fn image_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("images");
        let images =
            Array3::from_shape_fn((4, 5, 6), |(n, h, w)| (n * 64 + h * 7 + w) as u8);
        write_idx_images(&path, &images).unwrap();
        assert_eq!(load_idx_images(&path).unwrap(), images);
    }

    #[test]
    fn wrong_magic_for_labels() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("images");
        write_idx_images(&path, &Array3::zeros((2, 3, 3))).unwrap();
        assert!(load_idx_labels(&path).is_err());
        assert!(load_idx_images(&path).is_ok());
    }

    #[test]
    fn bad_magic_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("junk");
        fs::write(&path, [0u8, 0, 13, 1, 0, 0, 0, 1, 7]).unwrap();
        assert!(load_idx(&path).is_err());
    }

    #[test]
    fn truncation_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("short");
        // magic only, no dimension word
        fs::write(&path, MAGIC_LABELS.to_be_bytes()).unwrap();
        assert!(load_idx(&path).is_err());
        // declared 10 labels, provides 3
        let mut bytes = Vec::new();
        bytes.extend(MAGIC_LABELS.to_be_bytes());
        bytes.extend(10u32.to_be_bytes());
        bytes.extend([1, 2, 3]);
        fs::write(&path, &bytes).unwrap();
        assert!(load_idx(&path).is_err());
        // trailing garbage is a length mismatch too
        let mut bytes = Vec::new();
        bytes.extend(MAGIC_LABELS.to_be_bytes());
        bytes.extend(2u32.to_be_bytes());
        bytes.extend([1, 2, 3]);
        fs::write(&path, &bytes).unwrap();
        assert!(load_idx(&path).is_err());
    }
}

//! Real-dataset machinery: loaders for the MNIST and CIFAR-10 distribution
//! formats, the two dimension-selection strategies, random projections, PCA,
//! classical MDS, and the test-set interpolation-fraction experiment.

pub mod cifar;
pub mod eigen;
pub mod embedding;
pub mod idx;
pub mod mds;
pub mod pca;
pub mod projection;
pub mod proportion;
pub mod selection;

pub use cifar::{encode_cifar_record, load_cifar_batch, load_cifar_batches};
pub use eigen::{eigensolve_symmetric, Eigen};
pub use embedding::{load_embeddings, write_embeddings, EmbeddingHeader};
pub use idx::{load_idx_images, load_idx_labels, write_idx_images, write_idx_labels, IdxTensor};
pub use mds::{classical_mds, gram_matrix};
pub use pca::{pca_explained, PcaModel};
pub use projection::{
    random_dim_subset, random_projection, seeded_row_subset, select_columns, select_random_dims,
};
pub use proportion::{interpolation_proportion, ProportionReport};
pub use selection::{make_selection, DimSelection, SelectionStrategy};

use crate::error::{HullscopeError, Result};
use crate::point_set::PointSet;
use ndarray::{Array4, ArrayView4, Axis};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone)]
pub struct ImageDataset {
    pub name: String,
    pub train_images: Array4<u8>,
    pub train_labels: Vec<u8>,
    pub test_images: Array4<u8>,
    pub test_labels: Vec<u8>,
}

impl ImageDataset {
    pub fn new(
        name: impl Into<String>,
        train_images: Array4<u8>,
        train_labels: Vec<u8>,
        test_images: Array4<u8>,
        test_labels: Vec<u8>,
    ) -> Result<Self> {
        if train_images.dim().0 != train_labels.len() {
            return Err(HullscopeError::input(format!(
                "{} train images vs {} train labels",
                train_images.dim().0,
                train_labels.len()
            )));
        }
        if test_images.dim().0 != test_labels.len() {
            return Err(HullscopeError::input(format!(
                "{} test images vs {} test labels",
                test_images.dim().0,
                test_labels.len()
            )));
        }
        let (_, h1, w1, c1) = train_images.dim();
        let (_, h2, w2, c2) = test_images.dim();
        if (h1, w1, c1) != (h2, w2, c2) {
            return Err(HullscopeError::dim(
                "train and test image shapes must agree",
            ));
        }
        Ok(ImageDataset {
            name: name.into(),
            train_images,
            train_labels,
            test_images,
            test_labels,
        })
    }

    /// (H, W, C) of a single image.
    pub fn image_shape(&self) -> (usize, usize, usize) {
        let (_, h, w, c) = self.train_images.dim();
        (h, w, c)
    }

    /// MNIST from the four standard IDX files in `dir` (hyphenated or dotted
    /// filename variants).
    pub fn mnist_from_dir(dir: &Path) -> Result<ImageDataset> {
        let find = |names: &[&str]| -> Result<PathBuf> {
            names
                .iter()
                .map(|n| dir.join(n))
                .find(|p| p.is_file())
                .ok_or_else(|| {
                    HullscopeError::format(
                        dir.display().to_string(),
                        format!("none of {names:?} found"),
                    )
                })
        };
        let train_images = idx::load_idx_images(&find(&[
            "train-images-idx3-ubyte",
            "train-images.idx3-ubyte",
        ])?)?;
        let train_labels = idx::load_idx_labels(&find(&[
            "train-labels-idx1-ubyte",
            "train-labels.idx1-ubyte",
        ])?)?;
        let test_images = idx::load_idx_images(&find(&[
            "t10k-images-idx3-ubyte",
            "t10k-images.idx3-ubyte",
        ])?)?;
        let test_labels = idx::load_idx_labels(&find(&[
            "t10k-labels-idx1-ubyte",
            "t10k-labels.idx1-ubyte",
        ])?)?;
        ImageDataset::new(
            "mnist",
            train_images.insert_axis(Axis(3)),
            train_labels,
            test_images.insert_axis(Axis(3)),
            test_labels,
        )
    }

    /// CIFAR-10 from the binary batches in `dir` (or its standard
    /// `cifar-10-batches-bin` subdirectory).
    pub fn cifar10_from_dir(dir: &Path) -> Result<ImageDataset> {
        let base = if dir.join("data_batch_1.bin").is_file() {
            dir.to_path_buf()
        } else {
            dir.join("cifar-10-batches-bin")
        };
        let train_paths: Vec<PathBuf> = (1..=5)
            .map(|i| base.join(format!("data_batch_{i}.bin")))
            .collect();
        let (train_images, train_labels) = cifar::load_cifar_batches(&train_paths)?;
        let (test_images, test_labels) = cifar::load_cifar_batch(&base.join("test_batch.bin"))?;
        ImageDataset::new(
            "cifar10",
            train_images,
            train_labels,
            test_images,
            test_labels,
        )
    }
}

/// Dataset root: `$HULLSCOPE_DATA` if set, else `./data` when it exists.
pub fn data_root() -> Option<PathBuf> {
    if let Ok(v) = std::env::var("HULLSCOPE_DATA") {
        if !v.is_empty() {
            return Some(PathBuf::from(v));
        }
    }
    let fallback = PathBuf::from("data");
    fallback.is_dir().then_some(fallback)
}

/// Flatten the listed images row-major (channels innermost) to points in
/// [0, 1]^{H·W·C}.
pub fn images_to_points(images: ArrayView4<u8>, rows: &[usize]) -> Result<PointSet> {
    if rows.is_empty() {
        return Err(HullscopeError::input("row subset must be nonempty"));
    }
    let (n, h, w, c) = images.dim();
    let d = h * w * c;
    let mut flat = Vec::with_capacity(rows.len() * d);
    for &r in rows {
        if r >= n {
            return Err(HullscopeError::input(format!(
                "row {r} out of range for {n} images"
            )));
        }
        let img = images.index_axis(Axis(0), r);
        for hh in 0..h {
            for ww in 0..w {
                for cc in 0..c {
                    flat.push(img[[hh, ww, cc]] as f64 / 255.0);
                }
            }
        }
    }
    PointSet::from_rows(rows.len(), d, flat)
}

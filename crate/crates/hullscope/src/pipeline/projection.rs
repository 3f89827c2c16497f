//! Seeded linear maps: dense Gaussian random projection and uniform random
//! column subsets. Hull membership is invariant under any common linear map
//! of data and query, so neither transform rescales.

use crate::error::{HullscopeError, Result};
use crate::point_set::PointSet;
use crate::samplers::Seed;
use ndarray::Array2;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Y = X·G with G a seeded d×out_dim matrix of i.i.d. standard normals.
/// G depends only on (d, out_dim, seed), so calling with the same seed for
/// train and test applies the same map.
pub fn random_projection(x: &PointSet, out_dim: usize, seed: Seed) -> Result<PointSet> {
    if out_dim == 0 {
        return Err(HullscopeError::input("projection dimension must be >= 1"));
    }
    let d = x.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    let g = Array2::from_shape_fn((d, out_dim), |_| StandardNormal.sample(&mut rng));
    PointSet::new(x.as_array().dot(&g))
}

fn partial_fisher_yates(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.random_range(i..n);
        idx.swap(i, j);
    }
    idx.truncate(k);
    idx
}

/// A uniform k-subset of 0..dim without replacement, in draw order
/// (k = dim yields a uniform permutation). Deterministic per seed.
pub fn random_dim_subset(dim: usize, k: usize, seed: Seed) -> Result<Vec<usize>> {
    if k == 0 || k > dim {
        return Err(HullscopeError::domain(format!(
            "cannot choose {k} dimensions out of {dim}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    Ok(partial_fisher_yates(dim, k, &mut rng))
}

/// A uniform k-subset of 0..n_rows, for desk-scale train/test subsampling.
pub fn seeded_row_subset(n_rows: usize, k: usize, seed: Seed) -> Result<Vec<usize>> {
    if k == 0 || k > n_rows {
        return Err(HullscopeError::domain(format!(
            "cannot choose {k} rows out of {n_rows}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    Ok(partial_fisher_yates(n_rows, k, &mut rng))
}

pub fn select_columns(x: &PointSet, cols: &[usize]) -> Result<PointSet> {
    if cols.is_empty() {
        return Err(HullscopeError::input("column subset must be nonempty"));
    }
    let d = x.dim();
    let mut flat = Vec::with_capacity(x.len() * cols.len());
    for row in x.as_array().rows() {
        for &c in cols {
            if c >= d {
                return Err(HullscopeError::input(format!(
                    "column {c} out of range for dimension {d}"
                )));
            }
            flat.push(row[c]);
        }
    }
    PointSet::from_rows(x.len(), cols.len(), flat)
}

/// Keep a seeded uniform k-subset of columns; apply with the same seed to
/// train and test to keep the subsets aligned.
pub fn select_random_dims(x: &PointSet, k: usize, seed: Seed) -> Result<PointSet> {
    let cols = random_dim_subset(x.dim(), k, seed)?;
    select_columns(x, &cols)
}

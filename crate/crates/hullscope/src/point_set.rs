//! A validated collection of points in R^d, stored row-major.

use crate::error::{HullscopeError, Result};
use ndarray::{Array2, ArrayView1, ArrayView2};

/// N points in R^d. Row i is point i. Construction guarantees every
/// coordinate is finite and N, d >= 1.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    data: Array2<f64>,
}

impl PointSet {
    pub fn new(data: Array2<f64>) -> Result<Self> {
        let (n, d) = data.dim();
        if n == 0 || d == 0 {
            return Err(HullscopeError::dim(format!(
                "point set must be non-empty, got shape {}x{}",
                n, d
            )));
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(HullscopeError::input(
                "point set contains NaN or infinite coordinates",
            ));
        }
        Ok(PointSet { data })
    }

    /// Build from a flat row-major buffer.
    pub fn from_rows(n: usize, d: usize, flat: Vec<f64>) -> Result<Self> {
        if flat.len() != n * d {
            return Err(HullscopeError::dim(format!(
                "expected {} values for a {}x{} point set, got {}",
                n * d,
                n,
                d,
                flat.len()
            )));
        }
        let arr = Array2::from_shape_vec((n, d), flat)
            .map_err(|e| HullscopeError::dim(e.to_string()))?;
        PointSet::new(arr)
    }

    pub fn len(&self) -> usize {
        self.data.nrows()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees N >= 1
    }

    pub fn dim(&self) -> usize {
        self.data.ncols()
    }

    pub fn point(&self, i: usize) -> ArrayView1<'_, f64> {
        self.data.row(i)
    }

    pub fn view(&self) -> ArrayView2<'_, f64> {
        self.data.view()
    }

    pub fn as_array(&self) -> &Array2<f64> {
        &self.data
    }

    pub fn into_array(self) -> Array2<f64> {
        self.data
    }

    /// Largest row norm; used for relative-tolerance scaling.
    pub fn max_norm(&self) -> f64 {
        self.data
            .rows()
            .into_iter()
            .map(|r| r.dot(&r).sqrt())
            .fold(0.0, f64::max)
    }
}

/// Validate a query point against an expected dimension.
pub fn check_query(x: ArrayView1<'_, f64>, d: usize) -> Result<()> {
    if x.len() != d {
        return Err(HullscopeError::dim(format!(
            "query has dimension {}, point set has dimension {}",
            x.len(),
            d
        )));
    }
    if !x.iter().all(|v| v.is_finite()) {
        return Err(HullscopeError::input("query contains NaN or infinity"));
    }
    Ok(())
}

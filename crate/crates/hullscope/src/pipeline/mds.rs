//! Classical (Torgerson) multidimensional scaling: double-center the squared
//! distance matrix and embed with the top eigenpairs.

use crate::error::{HullscopeError, Result};
use crate::pipeline::eigen::eigensolve_symmetric;
use crate::point_set::PointSet;
use ndarray::Array2;

/// B = −½ J D² J with J = I − (1/N)·11ᵀ; symmetric by construction.
pub fn gram_matrix(x: &PointSet) -> Array2<f64> {
    let n = x.len();
    let arr = x.as_array();
    let sq_norms: Vec<f64> = (0..n).map(|i| arr.row(i).dot(&arr.row(i))).collect();
    let mut d2 = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in (i + 1)..n {
            let v = (sq_norms[i] + sq_norms[j] - 2.0 * arr.row(i).dot(&arr.row(j))).max(0.0);
            d2[[i, j]] = v;
            d2[[j, i]] = v;
        }
    }
    let row_means: Vec<f64> = (0..n).map(|i| d2.row(i).sum() / n as f64).collect();
    let grand = row_means.iter().sum::<f64>() / n as f64;
    let mut b = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            b[[i, j]] = -0.5 * (d2[[i, j]] - row_means[i] - row_means[j] + grand);
        }
    }
    b
}

/// Embed into k coordinates; negative eigenvalues are truncated at 0, so the
/// corresponding columns are zero.
pub fn classical_mds(x: &PointSet, k: usize) -> Result<PointSet> {
    let n = x.len();
    let limit = (n - 1).min(x.dim());
    if k == 0 || k > limit {
        return Err(HullscopeError::domain(format!(
            "embedding dimension {k} outside 1..={limit} for {n} points in dimension {}",
            x.dim()
        )));
    }
    let b = gram_matrix(x);
    let eig = eigensolve_symmetric(b.view())?;
    let mut coords = Array2::<f64>::zeros((n, k));
    for j in 0..k {
        let scale = eig.values[j].max(0.0).sqrt();
        for i in 0..n {
            coords[[i, j]] = eig.vectors[[i, j]] * scale;
        }
    }
    PointSet::new(coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::enumerate_hypercube;
    use ndarray::{array, Array2};

    fn sorted_pairwise_distances(x: &PointSet) -> Vec<f64> {
        let n = x.len();
        let arr = x.as_array();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let diff = &arr.row(i) - &arr.row(j);
                out.push(diff.dot(&diff).sqrt());
            }
        }
        out.sort_by(f64::total_cmp);
        out
    }

    #[test]
    fn square_embeds_exactly() {
        let x = PointSet::new(array![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        let y = classical_mds(&x, 2).unwrap();
        let da = sorted_pairwise_distances(&x);
        let db = sorted_pairwise_distances(&y);
        for (a, b) in da.iter().zip(&db) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn gram_psd_for_euclidean_input() {
        let x = enumerate_hypercube(4).unwrap();
        let b = gram_matrix(&x);
        let norm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        let eig = eigensolve_symmetric(b.view()).unwrap();
        let min = eig.values.last().copied().unwrap();
        assert!(min >= -1e-9 * norm, "min eigenvalue {min}, norm {norm}");
    }

    #[test]
    fn identical_rows_embed_to_zero() {
        let x = PointSet::new(Array2::from_elem((4, 3), 1.5)).unwrap();
        let y = classical_mds(&x, 2).unwrap();
        assert!(y.as_array().iter().all(|&v| v.abs() < 1e-12));
    }

    #[test]
    fn embedding_guard() {
        let x = PointSet::new(Array2::zeros((4, 2))).unwrap();
        assert!(classical_mds(&x, 3).is_err()); // k > d
        assert!(classical_mds(&x, 0).is_err());
        let tall = PointSet::new(Array2::zeros((2, 5))).unwrap();
        assert!(classical_mds(&tall, 2).is_err()); // k > n - 1
    }

    #[test]
    fn cube_collapse_loses_convex_position() {
        use crate::geometry::{convex_position_count, Tolerance};
        let cube = enumerate_hypercube(3).unwrap();
        let flat = classical_mds(&cube, 2).unwrap();
        let high = convex_position_count(&cube, &Tolerance::default()).unwrap();
        let low = convex_position_count(&flat, &Tolerance::default()).unwrap();
        assert_eq!(high.in_hull_count, 0);
        assert!(low.in_hull_count >= 1, "2-D shadow must trap some vertex");
    }
}

//! Symmetric eigensolver (cyclic Jacobi) shared by PCA and classical MDS.

use crate::error::{HullscopeError, Result};
use ndarray::{Array2, ArrayView2};

/// Eigenpairs sorted by eigenvalue descending; column j of `vectors` belongs
/// to `values[j]`.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Array2<f64>,
}

const MAX_SWEEPS: usize = 64;

fn off_diagonal_norm(a: &Array2<f64>) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[[i, j]] * a[[i, j]];
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi rotations until the off-diagonal Frobenius mass drops below
/// 1e-12 × ‖M‖. Input must be symmetric to 1e-10 relative.
pub fn eigensolve_symmetric(m: ArrayView2<f64>) -> Result<Eigen> {
    let n = m.nrows();
    if n == 0 || m.ncols() != n {
        return Err(HullscopeError::dim("eigensolver needs a square matrix"));
    }
    let max_abs = m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if !max_abs.is_finite() {
        return Err(HullscopeError::input("matrix entries must be finite"));
    }
    let sym_tol = 1e-10 * max_abs.max(1e-300);
    for i in 0..n {
        for j in (i + 1)..n {
            if (m[[i, j]] - m[[j, i]]).abs() > sym_tol {
                return Err(HullscopeError::domain(format!(
                    "matrix is not symmetric: |a[{i}][{j}] - a[{j}][{i}]| = {}",
                    (m[[i, j]] - m[[j, i]]).abs()
                )));
            }
        }
    }

    let mut a = m.to_owned();
    let mut v = Array2::<f64>::eye(n);
    let frob = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = 1e-12 * frob;
    if frob == 0.0 {
        return Ok(sorted(vec![0.0; n], v));
    }

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) < target {
            let values = (0..n).map(|i| a[[i, i]]).collect();
            return Ok(sorted(values, v));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[[p, q]];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[[q, q]] - a[[p, p]]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    // rotation is tiny; the first-order form avoids theta^2 overflow
                    1.0 / (2.0 * theta)
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..n {
                    let aip = a[[i, p]];
                    let aiq = a[[i, q]];
                    a[[i, p]] = c * aip - s * aiq;
                    a[[i, q]] = s * aip + c * aiq;
                }
                for i in 0..n {
                    let api = a[[p, i]];
                    let aqi = a[[q, i]];
                    a[[p, i]] = c * api - s * aqi;
                    a[[q, i]] = s * api + c * aqi;
                }
                for i in 0..n {
                    let vip = v[[i, p]];
                    let viq = v[[i, q]];
                    v[[i, p]] = c * vip - s * viq;
                    v[[i, q]] = s * vip + c * viq;
                }
            }
        }
    }
    Err(HullscopeError::domain(
        "Jacobi iteration did not converge within the sweep limit",
    ))
}

fn sorted(values: Vec<f64>, vectors: Array2<f64>) -> Eigen {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[j].partial_cmp(&values[i]).unwrap());
    let sorted_values: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let mut sorted_vectors = Array2::<f64>::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            sorted_vectors[[i, dst]] = vectors[[i, src]];
        }
    }
    Eigen {
        values: sorted_values,
        vectors: sorted_vectors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_matrix() {
        let eig = eigensolve_symmetric(Array2::<f64>::eye(4).view()).unwrap();
        assert!(eig.values.iter().all(|&v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn diagonal_sorted_with_axis_vectors() {
        let m = array![[3.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 2.0]];
        let eig = eigensolve_symmetric(m.view()).unwrap();
        assert_eq!(eig.values, vec![3.0, 2.0, 1.0]);
        // eigenvector for 3 is +-e0, for 2 is +-e2, for 1 is +-e1
        assert!((eig.vectors[[0, 0]].abs() - 1.0).abs() < 1e-12);
        assert!((eig.vectors[[2, 1]].abs() - 1.0).abs() < 1e-12);
        assert!((eig.vectors[[1, 2]].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_symmetric_reconstruction() {
        let n = 50;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut m = Array2::<f64>::zeros((n, n));
        for i in 0..n {
            for j in i..n {
                let v: f64 = rng.random::<f64>() * 2.0 - 1.0;
                m[[i, j]] = v;
                m[[j, i]] = v;
            }
        }
        let eig = eigensolve_symmetric(m.view()).unwrap();
        // M = V diag(values) V^T
        let mut recon = Array2::<f64>::zeros((n, n));
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    recon[[i, j]] += eig.values[k] * eig.vectors[[i, k]] * eig.vectors[[j, k]];
                }
            }
        }
        let err = (&recon - &m).iter().fold(0.0f64, |a, v| a.max(v.abs()));
        assert!(err < 1e-9, "reconstruction error {err}");
        let vtv = eig.vectors.t().dot(&eig.vectors);
        let ortho = (&vtv - &Array2::<f64>::eye(n))
            .iter()
            .fold(0.0f64, |a, v| a.max(v.abs()));
        assert!(ortho < 1e-9, "orthogonality error {ortho}");
        for w in eig.values.windows(2) {
            assert!(w[0] >= w[1]);
        }
    }

    #[test]
    fn asymmetric_rejected() {
        let m = array![[1.0, 2.0], [0.5, 1.0]];
        assert!(eigensolve_symmetric(m.view()).is_err());
    }

    #[test]
    fn zero_matrix() {
        let eig = eigensolve_symmetric(Array2::<f64>::zeros((3, 3)).view()).unwrap();
        assert_eq!(eig.values, vec![0.0; 3]);
    }
}

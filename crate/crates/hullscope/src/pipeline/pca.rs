//! Explained-variance PCA: eigenvalues of the sample covariance and the
//! component count needed to reach a variance threshold.

use crate::error::{HullscopeError, Result};
use crate::pipeline::eigen::eigensolve_symmetric;
use crate::point_set::PointSet;
use ndarray::Axis;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct PcaModel {
    /// Sample-covariance eigenvalues, descending, clipped at 0.
    pub eigenvalues: Vec<f64>,
    /// Set when the data carries no variance at all (e.g. constant rows);
    /// thresholds are then meaningless and `components_for` returns 0.
    pub degenerate: bool,
}

impl PcaModel {
    /// Smallest k whose leading eigenvalues reach fraction `q` of the total.
    pub fn components_for(&self, q: f64) -> usize {
        if self.degenerate || q <= 0.0 {
            return 0;
        }
        let total: f64 = self.eigenvalues.iter().sum();
        let mut acc = 0.0;
        for (k, lambda) in self.eigenvalues.iter().enumerate() {
            acc += lambda;
            if acc / total >= q {
                return k + 1;
            }
        }
        self.eigenvalues.len()
    }
}

pub fn pca_explained(x: &PointSet) -> Result<PcaModel> {
    let n = x.len();
    if n < 2 {
        return Err(HullscopeError::input("PCA needs at least 2 rows"));
    }
    let arr = x.as_array();
    let mean = arr.mean_axis(Axis(0)).unwrap();
    let centered = arr - &mean;
    let cov = centered.t().dot(&centered) / (n as f64 - 1.0);
    let eig = eigensolve_symmetric(cov.view())?;
    let eigenvalues: Vec<f64> = eig.values.iter().map(|&v| v.max(0.0)).collect();
    let total: f64 = eigenvalues.iter().sum();
    // variance at the level of centering round-off counts as none at all
    let scale = x.max_norm().max(1.0);
    let degenerate = total <= x.dim() as f64 * (1e-10 * scale).powi(2);
    Ok(PcaModel {
        eigenvalues,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::{sample, SamplerSpec, Seed};
    use ndarray::Array2;

    #[test]
    fn subspace_rank_recovered() {
        let x = sample(&SamplerSpec::affine(12, 3), 400, Seed(8)).unwrap();
        let model = pca_explained(&x).unwrap();
        assert!(!model.degenerate);
        assert_eq!(model.components_for(0.999999), 3);
        // trace identity: eigenvalue sum = trace of the sample covariance
        let arr = x.as_array();
        let mean = arr.mean_axis(Axis(0)).unwrap();
        let centered = arr - &mean;
        let trace: f64 = centered
            .t()
            .dot(&centered)
            .diag()
            .iter()
            .sum::<f64>()
            / (x.len() as f64 - 1.0);
        let total: f64 = model.eigenvalues.iter().sum();
        assert!(
            (total - trace).abs() <= 1e-9 * trace.abs().max(1.0),
            "trace {trace} vs eigenvalue sum {total}"
        );
    }

    #[test]
    fn isotropic_gaussian_nine_of_ten() {
        let x = sample(&SamplerSpec::gaussian(10, 1.0), 30_000, Seed(17)).unwrap();
        let model = pca_explained(&x).unwrap();
        let k = model.components_for(0.9);
        // equal-eigenvalue limit gives exactly 9; sampling noise may shift by one
        assert!((8..=10).contains(&k), "components_for(0.9) = {k}");
    }

    #[test]
    fn thresholds_monotone() {
        let x = sample(&SamplerSpec::gaussian(6, 1.0), 500, Seed(2)).unwrap();
        let model = pca_explained(&x).unwrap();
        let ks: Vec<usize> = [0.0, 0.3, 0.6, 0.9, 0.99, 1.0]
            .iter()
            .map(|&q| model.components_for(q))
            .collect();
        for w in ks.windows(2) {
            assert!(w[0] <= w[1], "{ks:?}");
        }
        assert_eq!(model.components_for(1.0), 6);
    }

    #[test]
    fn constant_data_degenerate() {
        let x = PointSet::new(Array2::from_elem((5, 3), 2.5)).unwrap();
        let model = pca_explained(&x).unwrap();
        assert!(model.degenerate);
        assert_eq!(model.components_for(0.9), 0);
        assert!(model.eigenvalues.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn single_row_rejected() {
        let x = PointSet::new(Array2::zeros((1, 3))).unwrap();
        assert!(pca_explained(&x).is_err());
    }
}

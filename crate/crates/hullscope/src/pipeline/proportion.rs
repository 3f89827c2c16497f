//! Fraction of a test set lying inside the hull of a training set.

use crate::error::{HullscopeError, Result};
use crate::geometry::{test_membership, MembershipStatus, Tolerance};
use crate::point_set::PointSet;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct ProportionReport {
    pub fraction: f64,
    pub interpolated: usize,
    pub total: usize,
    /// Queries whose membership solve hit the iteration cap (still counted
    /// under their best-effort status).
    pub nonconverged: usize,
}

/// Test every row of `test` against Hull(train); parallel across rows, with
/// counts independent of the worker pool.
pub fn interpolation_proportion(
    train: &PointSet,
    test: &PointSet,
    tol: &Tolerance,
) -> Result<ProportionReport> {
    if train.dim() != test.dim() {
        return Err(HullscopeError::dim(format!(
            "train dimension {} != test dimension {}",
            train.dim(),
            test.dim()
        )));
    }
    tol.validate()?;
    let (interpolated, nonconverged) = (0..test.len())
        .into_par_iter()
        .map(|i| -> Result<(usize, usize)> {
            let res = test_membership(train, test.point(i), tol)?;
            Ok((
                (res.status == MembershipStatus::Interpolation) as usize,
                (!res.converged) as usize,
            ))
        })
        .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
    Ok(ProportionReport {
        fraction: interpolated as f64 / test.len() as f64,
        interpolated,
        total: test.len(),
        nonconverged,
    })
}

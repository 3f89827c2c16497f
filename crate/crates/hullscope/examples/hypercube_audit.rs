//! All 2^d vertices of the hypercube are extreme points — every one of them
//! extrapolates the rest — yet a 2-D embedding of the same vertices shows
//! most of them comfortably "inside" the cloud. Low-dimensional pictures of
//! high-dimensional hulls mislead.

use hullscope::geometry::{convex_position_count, test_membership, MembershipStatus, Tolerance};
use hullscope::pipeline::classical_mds;
use hullscope::samplers::enumerate_hypercube;
use hullscope::PointSet;
use ndarray::s;

fn count_inside(points: &PointSet, tol: &Tolerance) -> anyhow::Result<usize> {
    let arr = points.as_array();
    let mut inside = 0;
    for i in 0..points.len() {
        let mut rest = arr.to_owned();
        rest.remove_index(ndarray::Axis(0), i);
        let res = test_membership(&PointSet::new(rest)?, arr.slice(s![i, ..]), tol)?;
        inside += (res.status == MembershipStatus::Interpolation) as usize;
    }
    Ok(inside)
}

fn main() -> anyhow::Result<()> {
    let tol = Tolerance::default();
    for d in [3usize, 5, 8] {
        let cube = enumerate_hypercube(d)?;
        let report = convex_position_count(&cube, &tol)?;
        let flat = classical_mds(&cube, 2)?;
        let inside_2d = count_inside(&flat, &tol)?;
        println!(
            "d={d}: {:>3} vertices, {} inside the others' hull in {d}-D, {inside_2d:>3} inside after 2-D embedding",
            cube.len(),
            report.in_hull_count,
        );
    }
    Ok(())
}

//! Decide whether a query point lies inside the convex hull of a data set,
//! and read the certificate either way: hull coefficients when inside, a
//! separating direction when outside.

use hullscope::geometry::{hull_distance, test_membership, MembershipStatus, Tolerance};
use hullscope::PointSet;
use ndarray::array;

fn main() -> anyhow::Result<()> {
    // a unit square plus its center, in the plane
    let data = PointSet::new(array![
        [0.0, 0.0],
        [1.0, 0.0],
        [1.0, 1.0],
        [0.0, 1.0],
        [0.5, 0.5],
    ])?;
    let tol = Tolerance::default();

    for query in [array![0.25, 0.5], array![1.5, 0.5], array![1.0, 1.0]] {
        let res = test_membership(&data, query.view(), &tol)?;
        print!("query {:?}: {:?}", query.as_slice().unwrap(), res.status);
        match res.status {
            MembershipStatus::Interpolation => {
                let lambda = res.coefficients.unwrap();
                println!(", witnessed by weights {lambda:.3?}");
                // the weights reproduce the query exactly
                let rebuilt: Vec<f64> = (0..2)
                    .map(|j| {
                        (0..data.len())
                            .map(|i| lambda[i] * data.as_array()[(i, j)])
                            .sum()
                    })
                    .collect();
                println!("  rebuilt {rebuilt:.6?}");
            }
            MembershipStatus::Extrapolation => {
                let w = res.witness.unwrap();
                // every data point scores lower than the query along w
                let q_score: f64 = w.iter().zip(query.iter()).map(|(a, b)| a * b).sum();
                let best: f64 = data
                    .as_array()
                    .rows()
                    .into_iter()
                    .map(|r| w.iter().zip(r.iter()).map(|(a, b)| a * b).sum())
                    .fold(f64::MIN, f64::max)
                    ;
                println!(
                    ", separated along {w:.3?} (query {q_score:.3} vs data max {best:.3})"
                );
            }
        }
    }

    // the distance query polishes the projection instead of exiting early
    let proj = hull_distance(&data, array![3.0, 0.5].view(), &tol)?;
    println!(
        "distance from (3, 0.5) to the hull: {:.6} in {} iterations",
        proj.distance, proj.iterations
    );
    Ok(())
}

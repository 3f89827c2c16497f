//! In high dimension virtually every random cloud is in convex position:
//! no point falls inside the hull of the others, so any fresh direction of
//! the data is an extreme one.

use hullscope::analytic::valtr_parallelogram;
use hullscope::geometry::Tolerance;
use hullscope::montecarlo::estimate_convex_position_prob;
use hullscope::samplers::{SamplerSpec, Seed};

fn main() -> anyhow::Result<()> {
    let tol = Tolerance::default();

    // plane: the estimate tracks the exact value
    let exact = valtr_parallelogram(4)?;
    let mc = estimate_convex_position_prob(&SamplerSpec::square(), 4, 50_000, Seed(3), &tol)?;
    println!(
        "4 uniform points in a square: exact {} = {:.5}, estimated {:.5} ± {:.5}",
        exact,
        exact.to_f64(),
        mc.p_hat,
        (mc.ci_high - mc.ci_low) / 2.0
    );

    // ball: d+4 points are almost surely in convex position once d grows
    println!("\nP[d+4 ball points in convex position]:");
    for d in [2usize, 5, 10, 20] {
        let res = estimate_convex_position_prob(
            &SamplerSpec::ball(d),
            d + 4,
            10_000,
            Seed(100 + d as u64),
            &tol,
        )?;
        println!("  d={d:>2}, n={:>2}:  p̂ = {:.4}", d + 4, res.p_hat);
    }

    // and the count of interior points vanishes accordingly
    println!("\nP[2d Gaussian points in convex position]:");
    for d in [2usize, 4, 8, 16] {
        let res = estimate_convex_position_prob(
            &SamplerSpec::gaussian(d, 1.0),
            2 * d,
            10_000,
            Seed(200 + d as u64),
            &tol,
        )?;
        println!("  d={d:>2}, n={:>2}:  p̂ = {:.4}", 2 * d, res.p_hat);
    }
    Ok(())
}

//! The extrapolation probability of a Gaussian query against a Gaussian
//! cloud, evaluated from the closed-form integral rather than by sampling.
//! At σ²=0 the query collapses onto the origin and the numbers reproduce
//! the exact origin-outside formula.

use hullscope::analytic::{gaussian_extrapolation_prob, wendel, AbsorptionParams, QuadratureConfig};

fn main() -> anyhow::Result<()> {
    let quad = QuadratureConfig::default();

    println!("P[query outside hull], d=3");
    println!("{:>5} {:>12} {:>12} {:>12} {:>14}", "N", "σ²=0.25", "σ²=1", "σ²=4", "σ²=0 vs exact");
    for n in [5usize, 10, 20, 40, 80] {
        let cells: Vec<f64> = [0.25, 1.0, 4.0]
            .iter()
            .map(|&s2| {
                gaussian_extrapolation_prob(&AbsorptionParams::new(n, 3, s2)?, &quad)
            })
            .collect::<Result<_, _>>()?;
        let at_zero = gaussian_extrapolation_prob(&AbsorptionParams::new(n, 3, 0.0)?, &quad)?;
        let exact = wendel(n, 3)?.to_f64();
        println!(
            "{n:>5} {:>12.6} {:>12.6} {:>12.6} {:>14.2e}",
            cells[0],
            cells[1],
            cells[2],
            (at_zero - exact).abs()
        );
    }

    // a wider query distribution leaks out of the hull more often, and more
    // dimensions make escape easier at any fixed N
    println!("\nP[query outside hull], σ²=1, by dimension");
    print!("{:>5}", "N\\d");
    for d in [2usize, 4, 6, 8] {
        print!("{d:>12}");
    }
    println!();
    for n in [16usize, 64, 256, 1024] {
        print!("{n:>5}");
        for d in [2usize, 4, 6, 8] {
            let p = gaussian_extrapolation_prob(&AbsorptionParams::new(n, d, 1.0)?, &quad)?;
            print!("{p:>12.6}");
        }
        println!();
    }
    Ok(())
}

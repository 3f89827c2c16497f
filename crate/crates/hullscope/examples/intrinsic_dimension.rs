//! Interpolation depends on the intrinsic dimension of the data, not the
//! ambient one: clouds confined to a 4-dimensional affine subspace give the
//! same hull probability whether they live in 8 or 128 coordinates, and PCA
//! recovers that 4 from the samples.

use hullscope::montecarlo::{estimate_interpolation_prob, EstimateConfig};
use hullscope::pipeline::pca_explained;
use hullscope::samplers::{sample, SamplerSpec, Seed};

fn main() -> anyhow::Result<()> {
    println!("p̂[query in hull], N=24 points with intrinsic dimension 4:");
    for (i, ambient) in [8usize, 32, 128].into_iter().enumerate() {
        let cfg = EstimateConfig::new(
            SamplerSpec::affine(ambient, 4),
            24,
            20_000,
            Seed(60 + i as u64),
        );
        let res = estimate_interpolation_prob(&cfg)?;
        println!(
            "  ambient d={ambient:>3}:  p̂ = {:.3}  [{:.3}, {:.3}]",
            res.p_hat, res.ci_low, res.ci_high
        );
    }

    let x = sample(&SamplerSpec::affine(32, 4), 200, Seed(5))?;
    let model = pca_explained(&x)?;
    println!("\nPCA on 200 such points in 32 coordinates:");
    println!(
        "  leading eigenvalues {:.4?}",
        &model.eigenvalues[..6.min(model.eigenvalues.len())]
    );
    for q in [0.9, 0.99, 0.999] {
        println!("  components for {q}: {}", model.components_for(q));
    }

    let full = sample(&SamplerSpec::gaussian(32, 1.0), 200, Seed(5))?;
    let spread = pca_explained(&full)?;
    println!(
        "\nfull-rank Gaussian for contrast: components for 0.99 = {}",
        spread.components_for(0.99)
    );
    Ok(())
}

//! Eigenvalue spectra and how many components carry a given share of the
//! variance, on clouds whose intrinsic dimension we control.

use hullscope::pipeline::pca_explained;
use hullscope::samplers::{sample, SamplerSpec, Seed};

fn main() -> anyhow::Result<()> {
    let cases = [
        ("gauss:d=16", SamplerSpec::gaussian(16, 1.0)),
        ("affine:d=16,dstar=2", SamplerSpec::affine(16, 2)),
        ("affine:d=16,dstar=6", SamplerSpec::affine(16, 6)),
        ("zero:d=16", SamplerSpec::zero(16)),
    ];
    for (label, spec) in cases {
        let x = sample(&spec, 400, Seed(21))?;
        let model = pca_explained(&x)?;
        if model.degenerate {
            println!("{label:<22} degenerate (no variance)");
            continue;
        }
        let top: Vec<String> = model.eigenvalues[..8]
            .iter()
            .map(|v| format!("{v:.2}"))
            .collect();
        println!(
            "{label:<22} k(0.90)={:<3} k(0.99)={:<3} spectrum {}",
            model.components_for(0.90),
            model.components_for(0.99),
            top.join(" ")
        );
    }
    Ok(())
}

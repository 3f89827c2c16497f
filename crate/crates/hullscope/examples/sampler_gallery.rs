//! Every point-cloud family the estimators accept, drawn once each.

use hullscope::samplers::{sample, SamplerKind, SamplerSpec, Seed};

fn main() -> anyhow::Result<()> {
    let specs = [
        SamplerSpec::gaussian(4, 1.0),
        SamplerSpec::gaussian(4, 0.25),
        SamplerSpec::ball(3),
        SamplerSpec::hypercube(5),
        SamplerSpec::square(),
        SamplerSpec::triangle(),
        SamplerSpec::simplex_walk(4),
        SamplerSpec::affine(16, 3),
        SamplerSpec::zero(2),
    ];
    for spec in specs {
        // The hypercube family enumerates all vertices, so its n is fixed.
        let n = match spec.kind {
            SamplerKind::HypercubeVertices => 1usize << spec.dim,
            _ => 6,
        };
        let x = sample(&spec, n, Seed(7))?;
        let first: Vec<f64> = x.as_array().row(0).iter().map(|v| (v * 1e3).round() / 1e3).collect();
        println!(
            "{:<22} n={} d={} max|x|={:.3}  first row {:?}",
            spec.to_string(),
            x.len(),
            x.dim(),
            x.max_norm(),
            first
        );
    }
    Ok(())
}

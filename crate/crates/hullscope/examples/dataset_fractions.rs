//! Fraction of held-out rows that land inside the training hull, across a
//! grid of target dimensions and both pixel-selection strategies.
//!
//! Points at MNIST when `HULLSCOPE_DATA` (or ./data) holds the IDX files;
//! otherwise falls back to a synthetic byte-image corpus with a low-rank
//! smooth signal plus pixel jitter, which shows the same collapse.

use hullscope::geometry::Tolerance;
use hullscope::pipeline::{
    self, interpolation_proportion, make_selection, seeded_row_subset, ImageDataset,
    SelectionStrategy,
};
use hullscope::rng::trial_rng;
use hullscope::samplers::Seed;
use ndarray::{Array3, Axis};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Smooth rank-6 signal in [0,255] plus independent per-pixel jitter.
pub fn synthetic_images(n: usize, h: usize, w: usize, seed: u64) -> Array3<u8> {
    let bases: [fn(f64, f64) -> f64; 6] = [
        |u, _| (std::f64::consts::PI * u).sin(),
        |_, v| (std::f64::consts::PI * v).sin(),
        |u, v| (std::f64::consts::PI * u).cos() * (std::f64::consts::PI * v).cos(),
        |u, v| (2.0 * std::f64::consts::PI * u).sin() * (std::f64::consts::PI * v).sin(),
        |u, v| (std::f64::consts::PI * u).sin() * (2.0 * std::f64::consts::PI * v).cos(),
        |u, v| u * v,
    ];
    let mut out = Array3::zeros((n, h, w));
    for i in 0..n {
        let mut rng = trial_rng(seed, i as u64);
        let z: Vec<f64> = (0..bases.len())
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        for r in 0..h {
            for c in 0..w {
                let u = r as f64 / (h - 1).max(1) as f64;
                let v = c as f64 / (w - 1).max(1) as f64;
                let signal: f64 = bases.iter().zip(&z).map(|(b, zk)| zk * b(u, v)).sum();
                let jitter = rng.random_range(-6.0..=6.0);
                let val = (128.0 + 34.0 * signal + jitter).clamp(0.0, 255.0);
                out[(i, r, c)] = val.round() as u8;
            }
        }
    }
    out
}

pub fn synthetic_dataset(n_train: usize, n_test: usize, h: usize, w: usize) -> ImageDataset {
    let train = synthetic_images(n_train, h, w, 0xDA7A_0001);
    let test = synthetic_images(n_test, h, w, 0xDA7A_0002);
    ImageDataset::new(
        "synthetic",
        train.insert_axis(Axis(3)),
        vec![0; n_train],
        test.insert_axis(Axis(3)),
        vec![0; n_test],
    )
    .expect("matching shapes by construction")
}

fn main() -> anyhow::Result<()> {
    let ds = match pipeline::data_root().and_then(|r| ImageDataset::mnist_from_dir(&r).ok()) {
        Some(ds) => ds,
        None => {
            eprintln!("no MNIST under HULLSCOPE_DATA; using the synthetic corpus");
            synthetic_dataset(2000, 300, 14, 14)
        }
    };
    let (h, w, c) = ds.image_shape();
    let n_train = ds.train_images.dim().0.min(2000);
    let n_test = ds.test_images.dim().0.min(300);
    let train_rows = seeded_row_subset(ds.train_images.dim().0, n_train, Seed(1))?;
    let test_rows = seeded_row_subset(ds.test_images.dim().0, n_test, Seed(2))?;
    let tol = Tolerance::default();

    println!("{} ({n_train} train / {n_test} test rows, {h}x{w}x{c})", ds.name);
    println!("{:<18} {:>4} {:>10} {:>12}", "strategy", "d", "fraction", "inside/total");
    for strategy in [SelectionStrategy::CentralPatch, SelectionStrategy::SmoothSubsample] {
        for d in [2usize, 4, 8, 16, 24] {
            let sel = make_selection(strategy, d, h, w, c)?;
            let train = sel.apply_batch(ds.train_images.view(), &train_rows)?;
            let test = sel.apply_batch(ds.test_images.view(), &test_rows)?;
            let rep = interpolation_proportion(&train, &test, &tol)?;
            println!(
                "{:<18} {:>4} {:>10.4} {:>7}/{}",
                strategy.to_string(),
                d,
                rep.fraction,
                rep.interpolated,
                rep.total
            );
        }
    }
    Ok(())
}

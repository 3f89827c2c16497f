//! Seeded generators for the synthetic distributions used throughout: the
//! isotropic Gaussian cloud, the unit hyperball, Gaussian data confined to a
//! low-dimensional affine subspace, a one-dimensional walk along simplex
//! edges, hypercube vertices, and the planar convex-position bodies.

use crate::error::{HullscopeError, Result};
use crate::point_set::PointSet;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

/// Master seed for an experiment; every trial derives its own sub-seed so
/// results cannot depend on scheduling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Seed(pub u64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SamplerKind {
    GaussianIso,
    BallUniform,
    AffineGaussian,
    SimplexWalk,
    HypercubeVertices,
    UniformParallelogram,
    UniformTriangle,
    ConstantZero,
}

/// A fully specified sampling distribution.
///
/// Text form (used by the CLI): `gauss:d=8,sigma=1`, `ball:d=12`,
/// `affine:d=32,dstar=4`, `simplex:d=6`, `cube:d=8`, `square`, `triangle`,
/// `zero:d=5`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SamplerSpec {
    pub kind: SamplerKind,
    pub dim: usize,
    /// Intrinsic dimension d* (AffineGaussian only).
    pub intrinsic_dim: Option<usize>,
    /// Scale multiplier for Gaussian draws (GaussianIso only; default 1).
    pub sigma: Option<f64>,
}

impl SamplerSpec {
    pub fn gaussian(dim: usize, sigma: f64) -> Self {
        SamplerSpec {
            kind: SamplerKind::GaussianIso,
            dim,
            intrinsic_dim: None,
            sigma: Some(sigma),
        }
    }

    pub fn ball(dim: usize) -> Self {
        SamplerSpec {
            kind: SamplerKind::BallUniform,
            dim,
            intrinsic_dim: None,
            sigma: None,
        }
    }

    pub fn affine(dim: usize, intrinsic_dim: usize) -> Self {
        SamplerSpec {
            kind: SamplerKind::AffineGaussian,
            dim,
            intrinsic_dim: Some(intrinsic_dim),
            sigma: None,
        }
    }

    pub fn simplex_walk(dim: usize) -> Self {
        SamplerSpec {
            kind: SamplerKind::SimplexWalk,
            dim,
            intrinsic_dim: None,
            sigma: None,
        }
    }

    pub fn hypercube(dim: usize) -> Self {
        SamplerSpec {
            kind: SamplerKind::HypercubeVertices,
            dim,
            intrinsic_dim: None,
            sigma: None,
        }
    }

    pub fn square() -> Self {
        SamplerSpec {
            kind: SamplerKind::UniformParallelogram,
            dim: 2,
            intrinsic_dim: None,
            sigma: None,
        }
    }

    pub fn triangle() -> Self {
        SamplerSpec {
            kind: SamplerKind::UniformTriangle,
            dim: 2,
            intrinsic_dim: None,
            sigma: None,
        }
    }

    pub fn zero(dim: usize) -> Self {
        SamplerSpec {
            kind: SamplerKind::ConstantZero,
            dim,
            intrinsic_dim: None,
            sigma: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |reason: &str| Err(HullscopeError::spec(self.to_string(), reason));
        if self.dim == 0 {
            return fail("dimension must be at least 1");
        }
        match self.kind {
            SamplerKind::GaussianIso => {
                if let Some(s) = self.sigma {
                    if !(s >= 0.0 && s.is_finite()) {
                        return fail("sigma must be a finite nonnegative real");
                    }
                }
            }
            SamplerKind::AffineGaussian => match self.intrinsic_dim {
                Some(ds) if ds >= 1 && ds <= self.dim => {}
                _ => return fail("affine sampler needs 1 <= dstar <= d"),
            },
            SamplerKind::SimplexWalk => {
                if self.dim < 2 {
                    return fail("simplex walk needs d >= 2");
                }
            }
            SamplerKind::HypercubeVertices => {
                if self.dim > MAX_CUBE_DIM {
                    return fail("hypercube enumeration capped at d = 20");
                }
            }
            SamplerKind::UniformParallelogram | SamplerKind::UniformTriangle => {
                if self.dim != 2 {
                    return fail("planar sampler is strictly two-dimensional");
                }
            }
            _ => {}
        }
        if self.sigma.is_some() && self.kind != SamplerKind::GaussianIso {
            return fail("sigma only applies to gauss");
        }
        if self.intrinsic_dim.is_some() && self.kind != SamplerKind::AffineGaussian {
            return fail("dstar only applies to affine");
        }
        Ok(())
    }

    /// Effective Gaussian scale (1 unless overridden).
    pub fn sigma_value(&self) -> f64 {
        self.sigma.unwrap_or(1.0)
    }
}

impl fmt::Display for SamplerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SamplerKind::GaussianIso => {
                write!(f, "gauss:d={},sigma={}", self.dim, self.sigma_value())
            }
            SamplerKind::BallUniform => write!(f, "ball:d={}", self.dim),
            SamplerKind::AffineGaussian => write!(
                f,
                "affine:d={},dstar={}",
                self.dim,
                self.intrinsic_dim.unwrap_or(0)
            ),
            SamplerKind::SimplexWalk => write!(f, "simplex:d={}", self.dim),
            SamplerKind::HypercubeVertices => write!(f, "cube:d={}", self.dim),
            SamplerKind::UniformParallelogram => write!(f, "square"),
            SamplerKind::UniformTriangle => write!(f, "triangle"),
            SamplerKind::ConstantZero => write!(f, "zero:d={}", self.dim),
        }
    }
}

impl FromStr for SamplerSpec {
    type Err = HullscopeError;

    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = match s.split_once(':') {
            Some((n, r)) => (n.trim(), r),
            None => (s.trim(), ""),
        };
        let mut dim: Option<usize> = None;
        let mut dstar: Option<usize> = None;
        let mut sigma: Option<f64> = None;
        for part in rest.split(',').filter(|p| !p.trim().is_empty()) {
            let (key, val) = part
                .split_once('=')
                .ok_or_else(|| HullscopeError::spec(s, "expected key=value pairs"))?;
            match key.trim() {
                "d" => {
                    dim = Some(val.trim().parse().map_err(|_| {
                        HullscopeError::spec(s, "d must be a positive integer")
                    })?)
                }
                "dstar" => {
                    dstar = Some(val.trim().parse().map_err(|_| {
                        HullscopeError::spec(s, "dstar must be a positive integer")
                    })?)
                }
                "sigma" => {
                    sigma = Some(val.trim().parse().map_err(|_| {
                        HullscopeError::spec(s, "sigma must be a real number")
                    })?)
                }
                other => {
                    return Err(HullscopeError::spec(s, format!("unknown key `{other}`")));
                }
            }
        }
        let kind = match name {
            "gauss" => SamplerKind::GaussianIso,
            "ball" => SamplerKind::BallUniform,
            "affine" => SamplerKind::AffineGaussian,
            "simplex" => SamplerKind::SimplexWalk,
            "cube" => SamplerKind::HypercubeVertices,
            "square" => SamplerKind::UniformParallelogram,
            "triangle" => SamplerKind::UniformTriangle,
            "zero" => SamplerKind::ConstantZero,
            other => {
                return Err(HullscopeError::spec(s, format!("unknown sampler `{other}`")));
            }
        };
        let default_dim = match kind {
            SamplerKind::UniformParallelogram | SamplerKind::UniformTriangle => Some(2),
            _ => None,
        };
        let dim = dim
            .or(default_dim)
            .ok_or_else(|| HullscopeError::spec(s, "missing d=<dim>"))?;
        let spec = SamplerSpec {
            kind,
            dim,
            intrinsic_dim: dstar,
            sigma,
        };
        spec.validate()?;
        Ok(spec)
    }
}

const MAX_CUBE_DIM: usize = 20;

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Point on the simplex edge walk at latent coordinate z in [0, d):
/// with i = floor(z) and t = z − i, the point is (1−t) e_i + t e_{i+1 mod d}.
/// The walk is a closed loop through all vertices of the standard simplex.
pub fn simplex_walk_point(dim: usize, z: f64) -> Vec<f64> {
    let i = (z.floor() as usize).min(dim - 1);
    let t = z - i as f64;
    let mut row = vec![0.0; dim];
    row[i] += 1.0 - t;
    row[(i + 1) % dim] += t;
    row
}

/// Orthonormal columns from a seeded Gaussian d×d* matrix via modified
/// Gram-Schmidt; the subspace (and signs) are a pure function of the rng
/// state, so a fixed seed fixes the subspace.
fn seeded_orthonormal(dim: usize, dstar: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut cols: Vec<Vec<f64>> = (0..dstar)
        .map(|_| (0..dim).map(|_| standard_normal(rng)).collect())
        .collect();
    for k in 0..dstar {
        for prev in 0..k {
            let dot: f64 = cols[k].iter().zip(&cols[prev]).map(|(a, b)| a * b).sum();
            let prev_col = cols[prev].clone();
            for (v, p) in cols[k].iter_mut().zip(&prev_col) {
                *v -= dot * p;
            }
        }
        let norm: f64 = cols[k].iter().map(|v| v * v).sum::<f64>().sqrt();
        for v in cols[k].iter_mut() {
            *v /= norm;
        }
    }
    cols
}

/// Draw n points using an existing generator. Callers that need several
/// logically coupled draws (e.g. data and query from the same subspace) make
/// them through one generator in one or more calls.
pub fn sample_with(spec: &SamplerSpec, n: usize, rng: &mut ChaCha8Rng) -> Result<PointSet> {
    spec.validate()?;
    if n == 0 {
        return Err(HullscopeError::input("sample count must be at least 1"));
    }
    let d = spec.dim;
    let mut flat = Vec::with_capacity(n * d);
    match spec.kind {
        SamplerKind::GaussianIso => {
            let s = spec.sigma_value();
            for _ in 0..n * d {
                flat.push(s * standard_normal(rng));
            }
        }
        SamplerKind::BallUniform => {
            for _ in 0..n {
                let dir: Vec<f64> = (0..d).map(|_| standard_normal(rng)).collect();
                let norm: f64 = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
                let radius = rng.random::<f64>().powf(1.0 / d as f64);
                flat.extend(dir.iter().map(|v| radius * v / norm));
            }
        }
        SamplerKind::AffineGaussian => {
            let dstar = spec.intrinsic_dim.unwrap();
            let q = seeded_orthonormal(d, dstar, rng);
            for _ in 0..n {
                let z: Vec<f64> = (0..dstar).map(|_| standard_normal(rng)).collect();
                for j in 0..d {
                    let mut acc = 0.0;
                    for (k, zk) in z.iter().enumerate() {
                        acc += q[k][j] * zk;
                    }
                    flat.push(acc);
                }
            }
        }
        SamplerKind::SimplexWalk => {
            for _ in 0..n {
                let z = rng.random::<f64>() * d as f64;
                flat.extend(simplex_walk_point(d, z));
            }
        }
        SamplerKind::HypercubeVertices => {
            if n != 1usize << d {
                return Err(HullscopeError::spec(
                    spec.to_string(),
                    format!("hypercube sampling needs n = 2^d = {}, got {n}", 1usize << d),
                ));
            }
            return enumerate_hypercube(d);
        }
        SamplerKind::UniformParallelogram => {
            for _ in 0..n {
                flat.push(rng.random::<f64>());
                flat.push(rng.random::<f64>());
            }
        }
        SamplerKind::UniformTriangle => {
            // area-uniform over the triangle (0,0) (1,0) (0,1)
            for _ in 0..n {
                let su = rng.random::<f64>().sqrt();
                let v = rng.random::<f64>();
                flat.push(su * (1.0 - v));
                flat.push(su * v);
            }
        }
        SamplerKind::ConstantZero => {
            flat.resize(n * d, 0.0);
        }
    }
    PointSet::from_rows(n, d, flat)
}

/// Draw n points from a fresh generator seeded with `seed`. Bit-identical
/// for identical (spec, n, seed).
pub fn sample(spec: &SamplerSpec, n: usize, seed: Seed) -> Result<PointSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    sample_with(spec, n, &mut rng)
}

/// All 2^dim vertices of the centered hypercube, row k read from the binary
/// digits of k (bit j set → +1 in coordinate j), k ascending.
pub fn enumerate_hypercube(dim: usize) -> Result<PointSet> {
    if dim == 0 || dim > MAX_CUBE_DIM {
        return Err(HullscopeError::spec(
            format!("cube:d={dim}"),
            "dimension must be between 1 and 20",
        ));
    }
    let n = 1usize << dim;
    let mut flat = Vec::with_capacity(n * dim);
    for k in 0..n {
        for j in 0..dim {
            flat.push(if k >> j & 1 == 1 { 1.0 } else { -1.0 });
        }
    }
    PointSet::from_rows(n, dim, flat)
}

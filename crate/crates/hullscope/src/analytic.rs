//! Closed-form probabilities: convex position of planar samples, absorption
//! of a Gaussian query point by the hull of a Gaussian cloud, the symmetric
//! (Wendel) special case, hull-growth thresholds, and Johnson-Lindenstrauss
//! dimension bounds.
//!
//! Everything that has an exact rational value is computed with big-integer
//! rationals; the absorption probability needs the integral
//! `g_n(r) = (1/sqrt(2 pi)) int Phi^n(sqrt(r) x) e^{-x^2/2} dx`, which is
//! evaluated by Gauss-Hermite quadrature with node-doubling validation. For
//! r < 0 the argument of Phi is imaginary; `Phi(iv) = 1/2 + (i/2) erfi(v/sqrt 2)`
//! is raised to the n-th power in polar form (log-modulus plus phase), which
//! sidesteps both the overflow of erfi and the cancellation a binomial
//! expansion would suffer.

use crate::error::{HullscopeError, Result};
use crate::quadrature::{hermite_table, GaussHermite};
use crate::special::{log_erfi, std_normal_cdf};
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::cmp::Ordering;
use std::fmt;
use std::sync::{Mutex, OnceLock};

const LN_2: f64 = std::f64::consts::LN_2;
const SQRT_PI: f64 = 1.7724538509055160273;
/// Agreement required between successive node-doubled quadrature values.
const REFINE_TOL: f64 = 1e-10;
/// Doublings attempted before giving up.
const MAX_DOUBLINGS: usize = 4;

// ---------------------------------------------------------------------------
// exact rationals

/// A probability held as a fully reduced big-integer fraction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExactProbability {
    ratio: BigRational,
}

impl ExactProbability {
    pub fn new(ratio: BigRational) -> Result<Self> {
        if ratio.is_negative() || ratio > BigRational::one() {
            return Err(HullscopeError::domain(format!(
                "probability {} outside [0, 1]",
                ratio
            )));
        }
        Ok(ExactProbability { ratio })
    }

    fn from_parts(numer: BigUint, denom: BigUint) -> Result<Self> {
        if denom.is_zero() {
            return Err(HullscopeError::domain("zero denominator"));
        }
        ExactProbability::new(BigRational::new(
            BigInt::from(numer),
            BigInt::from(denom),
        ))
    }

    pub fn numerator(&self) -> &BigInt {
        self.ratio.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.ratio.denom()
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.ratio
    }

    /// Rounded quotient. Computed through a scaled integer division (shift
    /// chosen from the bit-length gap) so it stays accurate when numerator
    /// and denominator individually exceed f64 range (factorials do,
    /// quickly), and for values far below 2^-64.
    pub fn to_f64(&self) -> f64 {
        let num = self.ratio.numer();
        let den = self.ratio.denom();
        if num.is_zero() {
            return 0.0;
        }
        let gap = (den.bits() as i64 - num.bits() as i64).max(0);
        let shift = 64 + gap;
        if shift > 1200 {
            return 0.0; // true value is below f64's subnormal floor
        }
        let q: BigInt = (num.clone() << (shift as usize)) / den;
        q.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-(shift as i32))
    }
}

impl fmt::Display for ExactProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ratio)
    }
}

fn factorial(n: usize) -> BigUint {
    let mut acc = BigUint::one();
    for k in 2..=n {
        acc *= k as u64;
    }
    acc
}

fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc *= (n - k + i) as u64;
        acc /= i as u64; // exact: acc is C(n-k+i, i) after each step
    }
    acc
}

// ---------------------------------------------------------------------------
// convex position (Valtr)

/// Probability that n i.i.d. uniform points in a parallelogram are in convex
/// position: (C(2n-2, n-1) / n!)^2.
pub fn valtr_parallelogram(n: usize) -> Result<ExactProbability> {
    if n < 3 {
        return Err(HullscopeError::domain(
            "convex position needs at least 3 points",
        ));
    }
    let c = binomial(2 * n - 2, n - 1);
    let f = factorial(n);
    ExactProbability::from_parts(&c * &c, &f * &f)
}

/// Probability that n i.i.d. uniform points in a triangle are in convex
/// position: 2^n (3n-3)! / ((n-1)!^3 (2n)!).
pub fn valtr_triangle(n: usize) -> Result<ExactProbability> {
    if n < 3 {
        return Err(HullscopeError::domain(
            "convex position needs at least 3 points",
        ));
    }
    let numer = (BigUint::one() << n) * factorial(3 * n - 3);
    let f1 = factorial(n - 1);
    let denom = &f1 * &f1 * &f1 * factorial(2 * n);
    ExactProbability::from_parts(numer, denom)
}

// ---------------------------------------------------------------------------
// hull-growth threshold

/// The sample-count threshold `2^{d/2} / d` separating the asymptotic
/// all-interpolation and all-extrapolation regimes.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HullGrowthThreshold {
    pub dim: usize,
    /// log2 of the threshold, finite for any dimension.
    pub log2_value: f64,
    /// The threshold itself; +inf once past f64 range (d around 2100).
    pub value: f64,
}

pub fn barany_threshold(dim: usize) -> Result<HullGrowthThreshold> {
    if dim == 0 {
        return Err(HullscopeError::domain("dimension must be at least 1"));
    }
    let log2_value = dim as f64 / 2.0 - (dim as f64).log2();
    Ok(HullGrowthThreshold {
        dim,
        log2_value,
        value: log2_value.exp2(),
    })
}

/// Which side of the threshold a configuration falls on, i.e. the value of
/// the limiting interpolation probability as d grows with N = N(d).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LimitRegime {
    /// N below threshold: the limit probability is 0.
    Zero,
    /// N above threshold: the limit probability is 1.
    One,
    /// Exactly on the threshold, where the dichotomy is silent.
    Indeterminate,
}

impl fmt::Display for LimitRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitRegime::Zero => write!(f, "0"),
            LimitRegime::One => write!(f, "1"),
            LimitRegime::Indeterminate => write!(f, "indeterminate"),
        }
    }
}

/// Exact comparison of N against 2^{d/2}/d, done in big integers so no
/// floating-point rounding can misclassify a near-threshold configuration:
/// N > 2^{d/2}/d iff (Nd)^2 > 2^d, and for odd d equality is impossible
/// because 2^d is not a perfect square.
pub fn barany_limit(n_points: usize, dim: usize) -> Result<LimitRegime> {
    if n_points == 0 || dim == 0 {
        return Err(HullscopeError::domain("need N >= 1 and d >= 1"));
    }
    let nd = BigUint::from(n_points as u64) * BigUint::from(dim as u64);
    let ord = if dim % 2 == 0 {
        nd.cmp(&(BigUint::one() << (dim / 2)))
    } else {
        (&nd * &nd).cmp(&(BigUint::one() << dim))
    };
    Ok(match ord {
        Ordering::Greater => LimitRegime::One,
        Ordering::Less => LimitRegime::Zero,
        Ordering::Equal => LimitRegime::Indeterminate,
    })
}

// ---------------------------------------------------------------------------
// Wendel

/// Probability that the origin lies outside the hull of N i.i.d. samples
/// from any symmetric distribution in R^d: 2^{1-N} sum_{k<d} C(N-1, k).
/// Equals 1 whenever N <= d.
pub fn wendel(n_points: usize, dim: usize) -> Result<ExactProbability> {
    if n_points == 0 || dim == 0 {
        return Err(HullscopeError::domain("need N >= 1 and d >= 1"));
    }
    let mut sum = BigUint::zero();
    for k in 0..=(dim - 1).min(n_points - 1) {
        sum += binomial(n_points - 1, k);
    }
    ExactProbability::from_parts(sum, BigUint::one() << (n_points - 1))
}

// ---------------------------------------------------------------------------
// quadrature configuration / absorption parameters

#[derive(Debug, Clone, Copy, Serialize)]
pub struct QuadratureConfig {
    /// Gauss-Hermite node count for the first pass.
    pub nodes: usize,
    /// Largest tolerated imaginary residue in the absorption sum.
    pub imag_tol: f64,
    /// Double the node count until two successive values agree to 1e-10.
    pub refine: bool,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            nodes: 200,
            imag_tol: 1e-8,
            refine: true,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.nodes < 32 {
            return Err(HullscopeError::input(format!(
                "quadrature needs at least 32 nodes, got {}",
                self.nodes
            )));
        }
        if !(self.imag_tol > 0.0 && self.imag_tol.is_finite()) {
            return Err(HullscopeError::input("imag_tol must be a positive real"));
        }
        Ok(())
    }
}

/// Inputs of the Gaussian absorption probability: N cloud points in R^d and
/// a query drawn from N(0, sigma^2 I_d).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AbsorptionParams {
    pub n_points: usize,
    pub dim: usize,
    pub sigma_sq: f64,
}

impl AbsorptionParams {
    pub fn new(n_points: usize, dim: usize, sigma_sq: f64) -> Result<Self> {
        let p = AbsorptionParams {
            n_points,
            dim,
            sigma_sq,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(HullscopeError::domain("dimension must be at least 1"));
        }
        if self.n_points < self.dim + 1 {
            return Err(HullscopeError::domain(format!(
                "absorption formula needs N >= d + 1, got N = {} with d = {}",
                self.n_points, self.dim
            )));
        }
        if !(self.sigma_sq >= 0.0 && self.sigma_sq.is_finite()) {
            return Err(HullscopeError::input(
                "sigma_sq must be a finite nonnegative real",
            ));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// g_n(r) and the absorption probability

fn ln_factorial(n: usize) -> f64 {
    static TABLE: OnceLock<Mutex<Vec<f64>>> = OnceLock::new();
    let cell = TABLE.get_or_init(|| Mutex::new(vec![0.0]));
    let mut v = cell.lock().expect("ln-factorial cache poisoned");
    while v.len() <= n {
        let k = v.len() as f64;
        let last = *v.last().unwrap();
        v.push(last + k.ln());
    }
    v[n]
}

fn log_binomial(n: usize, k: usize) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// One Gauss-Hermite pass over g_n(r) (after x = sqrt(2) t the integral is
/// (1/sqrt(pi)) int Phi^n(sqrt(2r) t) e^{-t^2} dt).
fn g_at(n: usize, r: f64, gh: &GaussHermite) -> Complex64 {
    let nf = n as f64;
    if r >= 0.0 {
        let c = (2.0 * r).sqrt();
        let mut total = 0.0;
        for (&t, &lw) in gh.nodes.iter().zip(&gh.log_weights) {
            let phi = std_normal_cdf(c * t);
            if phi > 0.0 {
                total += (lw + nf * phi.ln()).exp();
            }
        }
        Complex64::new(total / SQRT_PI, 0.0)
    } else {
        // Phi(sqrt(2r) t) = 1/2 + i a with a = erfi(sqrt(|r|) t) / 2;
        // raise to the n-th power as |z|^n e^{i n theta}
        let sq = (-r).sqrt();
        let mut re = 0.0;
        let mut im = 0.0;
        for (&t, &lw) in gh.nodes.iter().zip(&gh.log_weights) {
            let u = sq * t;
            let la = log_erfi(u.abs()) - LN_2; // ln |a|
            let (log_mod, theta) = if la < 300.0 {
                let a = la.exp().copysign(u);
                (0.5 * (0.25 + a * a).ln(), a.atan2(0.5))
            } else {
                // |a| so large that 1/2 is invisible next to it
                (la, std::f64::consts::FRAC_PI_2.copysign(u))
            };
            let mag = (nf * log_mod + lw).exp();
            re += mag * (nf * theta).cos();
            im += mag * (nf * theta).sin();
        }
        Complex64::new(re / SQRT_PI, im / SQRT_PI)
    }
}

/// The integral g_n(r), with refinement. For r < 0 the integrand only decays
/// when n |r| < 1; arguments outside that region are rejected. (Absorption
/// always stays inside it: k |r| = k s^2 / (1 + k s^2) < 1.)
pub fn g_function(n: usize, r: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    cfg.validate()?;
    if !r.is_finite() {
        return Err(HullscopeError::input("r must be finite"));
    }
    if r < 0.0 && n as f64 * r.abs() >= 1.0 {
        return Err(HullscopeError::domain(format!(
            "g_{n}({r}): the integrand does not decay once n|r| >= 1"
        )));
    }
    let mut nodes = cfg.nodes;
    let table = hermite_table(nodes)?;
    let mut prev = g_at(n, r, &table);
    if !cfg.refine {
        return Ok(prev);
    }
    for _ in 0..MAX_DOUBLINGS {
        nodes *= 2;
        let table = hermite_table(nodes)?;
        let next = g_at(n, r, &table);
        if (next - prev).norm() <= REFINE_TOL {
            return Ok(next);
        }
        prev = next;
    }
    Err(HullscopeError::Quadrature(format!(
        "g_{n}({r}) still moving after {MAX_DOUBLINGS} node doublings"
    )))
}

/// One pass of the absorption sum 2 (b_{N,d-1} + b_{N,d-3} + ...) with
/// b_{n,k} = C(n,k) g_k(-s^2/(1+k s^2)) g_{n-k}(s^2/(1+k s^2)). Terms are
/// combined through log-magnitudes so large binomials cannot overflow.
fn absorption_sum(p: &AbsorptionParams, gh: &GaussHermite) -> Complex64 {
    let s2 = p.sigma_sq;
    let mut total = Complex64::new(0.0, 0.0);
    let mut k = p.dim as i64 - 1;
    while k >= 0 {
        let ku = k as usize;
        let denom = 1.0 + k as f64 * s2;
        let gm = g_at(ku, -s2 / denom, gh);
        let gp = g_at(p.n_points - ku, s2 / denom, gh);
        let lm = log_binomial(p.n_points, ku) + gm.norm().ln() + gp.norm().ln();
        let phase = gm.arg() + gp.arg();
        let mag = lm.exp();
        total += Complex64::new(mag * phase.cos(), mag * phase.sin());
        k -= 2;
    }
    2.0 * total
}

/// Probability that a N(0, sigma^2 I_d) query falls outside the convex hull
/// of N i.i.d. N(0, I_d) points. Exact-formula evaluation via quadrature;
/// at sigma^2 = 0 it coincides with [`wendel`].
pub fn gaussian_extrapolation_prob(p: &AbsorptionParams, cfg: &QuadratureConfig) -> Result<f64> {
    p.validate()?;
    cfg.validate()?;
    let mut nodes = cfg.nodes;
    let table = hermite_table(nodes)?;
    let mut prev = absorption_sum(p, &table);
    let value = if cfg.refine {
        let mut settled = None;
        for _ in 0..MAX_DOUBLINGS {
            nodes *= 2;
            let table = hermite_table(nodes)?;
            let next = absorption_sum(p, &table);
            if (next.re - prev.re).abs() <= REFINE_TOL {
                settled = Some(next);
                break;
            }
            prev = next;
        }
        settled.ok_or_else(|| {
            HullscopeError::Quadrature(format!(
                "absorption sum for N = {}, d = {}, sigma^2 = {} still moving after {} node doublings",
                p.n_points, p.dim, p.sigma_sq, MAX_DOUBLINGS
            ))
        })?
    } else {
        prev
    };
    if value.im.abs() > cfg.imag_tol {
        return Err(HullscopeError::Quadrature(format!(
            "imaginary residue {:.3e} above tolerance {:.3e}",
            value.im, cfg.imag_tol
        )));
    }
    Ok(value.re.clamp(0.0, 1.0))
}

// ---------------------------------------------------------------------------
// Johnson-Lindenstrauss

/// Smallest embedding dimension guaranteeing all pairwise distances of N
/// points survive within a 1 +/- eps factor:
/// ceil( 24 / (3 eps^2 - 2 eps^3) * ln N ).
pub fn jll_dimension(n_points: usize, epsilon: f64) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(HullscopeError::domain(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    if n_points < 2 {
        return Err(HullscopeError::domain(
            "distance preservation needs at least 2 points",
        ));
    }
    let factor = 24.0 / (3.0 * epsilon * epsilon - 2.0 * epsilon * epsilon * epsilon);
    Ok((factor * (n_points as f64).ln()).ceil() as usize)
}

/// The exponential-dataset dilemma: with N = 2^d points, does the JLL target
/// dimension exceed d itself (making the projection useless)?
#[derive(Debug, Clone, Serialize)]
pub struct JllDilemma {
    pub dim: usize,
    pub epsilon: f64,
    /// log2 of the dataset size N = 2^dim.
    pub log2_n: f64,
    pub jll_dim: usize,
    pub dilemma: bool,
}

pub fn jll_dilemma(dim: usize, epsilon: f64) -> Result<JllDilemma> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(HullscopeError::domain(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    if dim == 0 {
        return Err(HullscopeError::domain("dimension must be at least 1"));
    }
    // ln N computed in log domain: N = 2^dim would overflow any integer type
    let ln_n = dim as f64 * LN_2;
    let factor = 24.0 / (3.0 * epsilon * epsilon - 2.0 * epsilon * epsilon * epsilon);
    let jll_dim = (factor * ln_n).ceil() as usize;
    Ok(JllDilemma {
        dim,
        epsilon,
        log2_n: dim as f64,
        jll_dim,
        dilemma: jll_dim > dim,
    })
}

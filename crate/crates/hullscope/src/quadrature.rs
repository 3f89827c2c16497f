//! Gauss-Hermite rules with log-domain weights.
//!
//! Nodes are the roots of the physicists' Hermite polynomial H_n, found by
//! Newton iteration on the *Hermite function* psi_n (the orthonormal,
//! exp(-x^2/2)-damped variant) whose recurrence stays O(1) in magnitude, so
//! rules with thousands of nodes are as stable as small ones. Weights are
//! kept as logarithms: the classical w_i = e^{-x_i^2} / (n psi_{n-1}(x_i)^2)
//! underflows f64 for |x_i| beyond ~27, but the integrands downstream are
//! evaluated in log space anyway.

use crate::error::{HullscopeError, Result};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// An n-point rule for integrals of the form `int f(t) e^{-t^2} dt`.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    /// Roots of H_n, ascending, antisymmetric about 0.
    pub nodes: Vec<f64>,
    /// ln of the corresponding weights.
    pub log_weights: Vec<f64>,
}

/// psi_n(x) and its derivative, scaled: true value = returned value * e^{log_scale}.
/// psi_0 = pi^{-1/4} e^{-x^2/2}; psi_k = x sqrt(2/k) psi_{k-1} - sqrt((k-1)/k) psi_{k-2}.
fn psi_scaled(n: usize, x: f64) -> (f64, f64, f64) {
    let mut log_scale = -x * x / 2.0;
    let p0 = std::f64::consts::PI.powf(-0.25);
    if n == 0 {
        return (p0, -x * p0, log_scale);
    }
    let mut p_prev = p0;
    let mut p = p0 * x * std::f64::consts::SQRT_2;
    for k in 2..=n {
        let kf = k as f64;
        let p_next = x * (2.0 / kf).sqrt() * p - ((kf - 1.0) / kf).sqrt() * p_prev;
        p_prev = p;
        p = p_next;
        let m = p.abs().max(p_prev.abs());
        if m > 1e100 || (m < 1e-100 && m > 0.0) {
            p /= m;
            p_prev /= m;
            log_scale += m.ln();
        }
    }
    // psi_n' = -x psi_n + sqrt(2n) psi_{n-1}
    let dp = -x * p + (2.0 * n as f64).sqrt() * p_prev;
    (p, dp, log_scale)
}

impl GaussHermite {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(HullscopeError::input("quadrature rule needs n >= 1 nodes"));
        }
        let m = n.div_ceil(2);
        let nf = n as f64;
        let mut nodes = vec![0.0; n];
        let mut log_weights = vec![0.0; n];
        let mut roots: Vec<f64> = Vec::with_capacity(m);
        let mut z = 0.0_f64;
        for i in 0..m {
            // initial guesses: largest root from the Airy-zone asymptotic,
            // then successive extrapolation down the root ladder
            z = match i {
                0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
                1 => z - 1.14 * nf.powf(0.426) / z,
                2 => 1.86 * z - 0.86 * roots[0],
                3 => 1.91 * z - 0.91 * roots[1],
                _ => 2.0 * z - roots[i - 2],
            };
            let mut converged = false;
            for _ in 0..100 {
                let (p, dp, _) = psi_scaled(n, z);
                let dz = p / dp; // scale factor cancels
                z -= dz;
                if dz.abs() < 1e-15 * z.abs().max(1.0) {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(HullscopeError::Quadrature(format!(
                    "Newton iteration stalled for node {i} of a {n}-point rule"
                )));
            }
            if n % 2 == 1 && i == m - 1 {
                z = 0.0; // middle root is exact by symmetry
            }
            roots.push(z);
            let (pm1, _, ls) = psi_scaled(n - 1, z);
            let lw = -z * z - nf.ln() - 2.0 * (pm1.abs().ln() + ls);
            nodes[n - 1 - i] = z;
            log_weights[n - 1 - i] = lw;
            nodes[i] = -z;
            log_weights[i] = lw;
        }
        Ok(GaussHermite { nodes, log_weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Plain-weight integration of `f` against e^{-t^2}; fine whenever the
    /// weights themselves are representable (they are for any n used here —
    /// underflowed tail weights contribute exact zeros).
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.log_weights)
            .map(|(&t, &lw)| lw.exp() * f(t))
            .sum()
    }
}

static TABLE_CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussHermite>>>> = OnceLock::new();

/// Shared, lazily built rule of a given size. Building a rule is cheap but
/// not free, and sweeps evaluate thousands of integrals on the same grid.
pub fn hermite_table(n: usize) -> Result<Arc<GaussHermite>> {
    let cache = TABLE_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("quadrature cache poisoned");
    if let Some(t) = map.get(&n) {
        return Ok(Arc::clone(t));
    }
    let t = Arc::new(GaussHermite::new(n)?);
    map.insert(n, Arc::clone(&t));
    Ok(Arc::clone(&t))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT_PI: f64 = 1.7724538509055159;

    #[test]
    fn five_point_rule_matches_reference() {
        // classical values: nodes are roots of H_5
        let gh = GaussHermite::new(5).unwrap();
        let want_nodes = [
            -2.0201828704560856,
            -0.9585724646138185,
            0.0,
            0.9585724646138185,
            2.0201828704560856,
        ];
        let want_weights = [
            0.019953242059045917,
            0.3936193231522411,
            0.9453087204829418,
            0.3936193231522411,
            0.019953242059045917,
        ];
        for i in 0..5 {
            assert!((gh.nodes[i] - want_nodes[i]).abs() < 1e-14, "node {i}");
            assert!(
                (gh.log_weights[i].exp() - want_weights[i]).abs() < 1e-14,
                "weight {i}"
            );
        }
    }

    #[test]
    fn moments_are_exact() {
        for n in [1usize, 2, 5, 64, 200, 401] {
            let gh = GaussHermite::new(n).unwrap();
            let m0 = gh.integrate(|_| 1.0);
            let m1 = gh.integrate(|t| t);
            assert!((m0 - SQRT_PI).abs() < 1e-12 * SQRT_PI, "n={n} m0={m0}");
            assert!(m1.abs() < 1e-13, "n={n} m1={m1}");
            if n >= 2 {
                let m2 = gh.integrate(|t| t * t);
                assert!((m2 - SQRT_PI / 2.0).abs() < 1e-12, "n={n} m2={m2}");
            }
            if n >= 3 {
                let m4 = gh.integrate(|t| t.powi(4));
                assert!((m4 - 0.75 * SQRT_PI).abs() < 1e-11, "n={n} m4={m4}");
            }
        }
    }

    #[test]
    fn non_polynomial_integrand() {
        // int e^{-t^2} cos t dt = sqrt(pi) e^{-1/4}
        let gh = GaussHermite::new(40).unwrap();
        let got = gh.integrate(f64::cos);
        let want = SQRT_PI * (-0.25_f64).exp();
        assert!((got - want).abs() < 1e-14);
    }

    #[test]
    fn nodes_sorted_and_antisymmetric() {
        let gh = GaussHermite::new(30).unwrap();
        for w in gh.nodes.windows(2) {
            assert!(w[0] < w[1]);
        }
        for i in 0..gh.len() {
            let j = gh.len() - 1 - i;
            assert_eq!(gh.nodes[i], -gh.nodes[j]);
            assert_eq!(gh.log_weights[i], gh.log_weights[j]);
        }
    }

    #[test]
    fn tail_log_weights_below_f64_range_are_finite() {
        // n = 800 has |x| ~ 39, i.e. classical weights ~ e^{-1540}: far below
        // f64; the log representation must stay finite and ordered
        let gh = GaussHermite::new(800).unwrap();
        assert!(gh.log_weights.iter().all(|lw| lw.is_finite()));
        assert!(*gh.log_weights.first().unwrap() < -1000.0);
        let m0 = gh.integrate(|_| 1.0);
        assert!((m0 - SQRT_PI).abs() < 1e-11);
    }

    #[test]
    fn zero_nodes_rejected() {
        assert!(GaussHermite::new(0).is_err());
    }

    #[test]
    fn cache_returns_same_table() {
        let a = hermite_table(64).unwrap();
        let b = hermite_table(64).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }
}

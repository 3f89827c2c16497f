//! Seeded, parallel Monte-Carlo estimation of interpolation and
//! convex-position probabilities.
//!
//! Every trial derives its own generator from (master seed, trial index), so
//! estimates are bit-reproducible no matter how rayon schedules the work.
//! When data and query come from the same distribution, each trial draws
//! N + 1 rows in a single call and uses the last row as the query: the N + 1
//! values are then exchangeable by construction (and coupled samplers such
//! as the affine-subspace one share their subspace between data and query).

use crate::error::{HullscopeError, Result};
use crate::geometry::{convex_position_decision, test_membership, MembershipStatus, Tolerance};
use crate::point_set::PointSet;
use crate::rng::{subsystem_rng, trial_rng};
use crate::samplers::{sample_with, SamplerSpec, Seed};
use ndarray::{s, Array1};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::time::Instant;

/// z-score of the two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;
/// z-score of the two-sided 99% normal quantile.
pub const Z99: f64 = 2.5758293035489004;

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    assert!(trials >= 1 && successes <= trials);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Debug, Clone)]
pub struct EstimateConfig {
    pub data_spec: SamplerSpec,
    /// Query distribution; `None` means "same as the data" (drawn jointly,
    /// see module docs).
    pub query_spec: Option<SamplerSpec>,
    /// N: dataset rows per trial.
    pub n_points: usize,
    pub trials: u64,
    pub seed: Seed,
    pub tol: Tolerance,
}

impl EstimateConfig {
    pub fn new(data_spec: SamplerSpec, n_points: usize, trials: u64, seed: Seed) -> Self {
        EstimateConfig {
            data_spec,
            query_spec: None,
            n_points,
            trials,
            seed,
            tol: Tolerance::default(),
        }
    }

    pub fn with_query(mut self, query: SamplerSpec) -> Self {
        self.query_spec = Some(query);
        self
    }

    /// The effective query distribution.
    pub fn query(&self) -> SamplerSpec {
        self.query_spec.unwrap_or(self.data_spec)
    }

    pub fn validate(&self) -> Result<()> {
        self.data_spec.validate()?;
        self.query().validate()?;
        self.tol.validate()?;
        if self.trials == 0 {
            return Err(HullscopeError::input("trials must be at least 1"));
        }
        if self.n_points == 0 {
            return Err(HullscopeError::input("n_points must be at least 1"));
        }
        if self.query().dim != self.data_spec.dim {
            return Err(HullscopeError::dim(format!(
                "query dimension {} does not match data dimension {}",
                self.query().dim,
                self.data_spec.dim
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimateResult {
    pub p_hat: f64,
    pub successes: u64,
    pub trials: u64,
    /// Wilson 95% bounds.
    pub ci_low: f64,
    pub ci_high: f64,
    /// Trials whose membership test hit the iteration cap (their best-effort
    /// status is still counted).
    pub nonconverged: u64,
    pub seed: Seed,
    pub wall_time: f64,
}

impl EstimateResult {
    fn from_counts(successes: u64, trials: u64, nonconverged: u64, seed: Seed, secs: f64) -> Self {
        let (ci_low, ci_high) = wilson_interval(successes, trials, Z95);
        EstimateResult {
            p_hat: successes as f64 / trials as f64,
            successes,
            trials,
            ci_low,
            ci_high,
            nonconverged,
            seed,
            wall_time: secs,
        }
    }

    /// Wilson interval at another confidence (e.g. [`Z99`]).
    pub fn interval(&self, z: f64) -> (f64, f64) {
        wilson_interval(self.successes, self.trials, z)
    }
}

/// Tag for the query sub-stream when the query distribution differs from the
/// data distribution.
const QUERY_STREAM: u64 = 1;

fn membership_trial(cfg: &EstimateConfig, trial: u64) -> Result<(bool, bool)> {
    let mut rng = trial_rng(cfg.seed.0, trial);
    let query_spec = cfg.query();
    let (data, query): (PointSet, Array1<f64>) = if query_spec == cfg.data_spec {
        let all = sample_with(&cfg.data_spec, cfg.n_points + 1, &mut rng)?;
        let arr = all.into_array();
        let query = arr.row(cfg.n_points).to_owned();
        let data = arr.slice(s![..cfg.n_points, ..]).to_owned();
        (PointSet::new(data)?, query)
    } else {
        let data = sample_with(&cfg.data_spec, cfg.n_points, &mut rng)?;
        let mut qrng = subsystem_rng(cfg.seed.0, trial, QUERY_STREAM);
        let q = sample_with(&query_spec, 1, &mut qrng)?;
        (data, q.as_array().row(0).to_owned())
    };
    let res = test_membership(&data, query.view(), &cfg.tol)?;
    Ok((res.status == MembershipStatus::Interpolation, !res.converged))
}

fn run_trials<F>(trials: u64, trial_fn: F) -> Result<(u64, u64)>
where
    F: Fn(u64) -> Result<(bool, bool)> + Sync,
{
    (0..trials)
        .into_par_iter()
        .map(|i| trial_fn(i).map(|(s, nc)| (s as u64, nc as u64)))
        .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))
}

/// Probability that a fresh query lands inside the hull of N data points.
pub fn estimate_interpolation_prob(cfg: &EstimateConfig) -> Result<EstimateResult> {
    cfg.validate()?;
    let start = Instant::now();
    let (successes, nonconverged) = run_trials(cfg.trials, |i| membership_trial(cfg, i))?;
    Ok(EstimateResult::from_counts(
        successes,
        cfg.trials,
        nonconverged,
        cfg.seed,
        start.elapsed().as_secs_f64(),
    ))
}

/// Probability that n i.i.d. points from `spec` are in convex position
/// (no point inside the hull of the others).
pub fn estimate_convex_position_prob(
    spec: &SamplerSpec,
    n: usize,
    trials: u64,
    seed: Seed,
    tol: &Tolerance,
) -> Result<EstimateResult> {
    spec.validate()?;
    tol.validate()?;
    if n < 3 {
        return Err(HullscopeError::input(
            "convex position needs at least 3 points",
        ));
    }
    if trials == 0 {
        return Err(HullscopeError::input("trials must be at least 1"));
    }
    let start = Instant::now();
    let (successes, nonconverged) = run_trials(trials, |i| {
        let mut rng = trial_rng(seed.0, i);
        let xset = sample_with(spec, n, &mut rng)?;
        let dec = convex_position_decision(&xset, tol)?;
        Ok((dec.in_convex_position, !dec.all_converged))
    })?;
    Ok(EstimateResult::from_counts(
        successes,
        trials,
        nonconverged,
        seed,
        start.elapsed().as_secs_f64(),
    ))
}

/// One line of the CSV/JSON output shared by estimators and sweeps.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub kind: String,
    pub data_spec: String,
    pub query_spec: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub d: usize,
    pub trials: u64,
    pub successes: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub nonconverged: u64,
    pub seed: u64,
    pub seconds: f64,
}

impl SweepRow {
    pub fn membership(cfg: &EstimateConfig, res: &EstimateResult) -> SweepRow {
        SweepRow {
            kind: "interpolation".into(),
            data_spec: cfg.data_spec.to_string(),
            query_spec: cfg.query().to_string(),
            n: cfg.n_points,
            d: cfg.data_spec.dim,
            trials: res.trials,
            successes: res.successes,
            p_hat: res.p_hat,
            ci_low: res.ci_low,
            ci_high: res.ci_high,
            nonconverged: res.nonconverged,
            seed: res.seed.0,
            seconds: res.wall_time,
        }
    }

    pub fn convex_position(spec: &SamplerSpec, n: usize, res: &EstimateResult) -> SweepRow {
        SweepRow {
            kind: "convex_position".into(),
            data_spec: spec.to_string(),
            query_spec: spec.to_string(),
            n,
            d: spec.dim,
            trials: res.trials,
            successes: res.successes,
            p_hat: res.p_hat,
            ci_low: res.ci_low,
            ci_high: res.ci_high,
            nonconverged: res.nonconverged,
            seed: res.seed.0,
            seconds: res.wall_time,
        }
    }
}

fn respec(spec: &SamplerSpec, dim: usize) -> SamplerSpec {
    let mut s = *spec;
    s.dim = dim;
    s
}

/// Run the estimator over a (d, N) grid; one row per cell, d-major order.
/// Dimensions are substituted into both data and query specs.
pub fn sweep(base: &EstimateConfig, n_grid: &[usize], d_grid: &[usize]) -> Result<Vec<SweepRow>> {
    if n_grid.is_empty() || d_grid.is_empty() {
        return Err(HullscopeError::input("sweep grids must be nonempty"));
    }
    let mut rows = Vec::with_capacity(n_grid.len() * d_grid.len());
    for &d in d_grid {
        for &n in n_grid {
            let mut cfg = base.clone();
            cfg.data_spec = respec(&base.data_spec, d);
            cfg.query_spec = base.query_spec.as_ref().map(|q| respec(q, d));
            cfg.n_points = n;
            let res = estimate_interpolation_prob(&cfg)?;
            rows.push(SweepRow::membership(&cfg, &res));
        }
    }
    Ok(rows)
}

/// Serialize rows with the canonical header
/// `kind,data_spec,query_spec,N,d,trials,successes,p_hat,ci_low,ci_high,nonconverged,seed,seconds`.
pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)
            .map_err(|e| HullscopeError::input(format!("csv serialization failed: {e}")))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize()
        .map(|rec| rec.map_err(|e| HullscopeError::input(format!("csv parse failed: {e}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(spec: SamplerSpec, n: usize, trials: u64) -> EstimateConfig {
        EstimateConfig::new(spec, n, trials, Seed(20240817))
    }

    #[test]
    fn wilson_known_values() {
        let (lo, hi) = wilson_interval(5, 10, Z95);
        assert!((lo - 0.23659309) < 1e-6 && (lo - 0.23659309) > -1e-6, "{lo}");
        assert!((hi - 0.76340691) < 1e-6 && (hi - 0.76340691) > -1e-6, "{hi}");
        let (lo, hi) = wilson_interval(0, 10, Z95);
        assert!(lo == 0.0 && hi > 0.0 && hi < 0.35);
        let (lo, hi) = wilson_interval(10, 10, Z95);
        assert!(hi > 1.0 - 1e-12 && lo < 1.0 && lo > 0.65);
    }

    #[test]
    fn one_dimensional_closed_form() {
        // with data and query exchangeable, a d=1 query is interior iff it is
        // neither the minimum nor the maximum of the N+1 values:
        // p = (N-1)/(N+1); N = 3 gives exactly 1/2
        let cfg = base(SamplerSpec::gaussian(1, 1.0), 3, 40_000);
        let res = estimate_interpolation_prob(&cfg).unwrap();
        let (lo, hi) = res.interval(Z99);
        assert!(lo <= 0.5 && 0.5 <= hi, "p_hat = {} [{lo}, {hi}]", res.p_hat);
        assert_eq!(res.nonconverged, 0);
    }

    #[test]
    fn wendel_oracle_matches() {
        // symmetric data, query at the origin: p_interp = 1 - wendel(N, d);
        // N = 6, d = 3 gives 1 - 1/2 = 1/2
        let cfg = base(SamplerSpec::gaussian(3, 1.0), 6, 40_000)
            .with_query(SamplerSpec::zero(3));
        let res = estimate_interpolation_prob(&cfg).unwrap();
        let (lo, hi) = res.interval(Z99);
        assert!(lo <= 0.5 && 0.5 <= hi, "p_hat = {} [{lo}, {hi}]", res.p_hat);
    }

    #[test]
    fn reproducible_across_thread_counts() {
        let cfg = base(SamplerSpec::gaussian(2, 1.0), 8, 2_000);
        let counts: Vec<u64> = [1usize, 4]
            .iter()
            .map(|&k| {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(k)
                    .build()
                    .unwrap();
                pool.install(|| estimate_interpolation_prob(&cfg).unwrap().successes)
            })
            .collect();
        assert_eq!(counts[0], counts[1]);
        // and across repeated runs in the ambient pool
        let again = estimate_interpolation_prob(&cfg).unwrap();
        assert_eq!(again.successes, counts[0]);
    }

    #[test]
    fn three_points_always_convex_position() {
        let res = estimate_convex_position_prob(
            &SamplerSpec::triangle(),
            3,
            500,
            Seed(5),
            &Tolerance::default(),
        )
        .unwrap();
        assert_eq!(res.successes, res.trials);
    }

    #[test]
    fn square_four_points_matches_exact_value() {
        let res = estimate_convex_position_prob(
            &SamplerSpec::square(),
            4,
            40_000,
            Seed(99),
            &Tolerance::default(),
        )
        .unwrap();
        let want = 25.0 / 36.0;
        let (lo, hi) = res.interval(Z99);
        assert!(lo <= want && want <= hi, "p_hat = {} [{lo}, {hi}]", res.p_hat);
    }

    #[test]
    fn convex_position_needs_three() {
        let err = estimate_convex_position_prob(
            &SamplerSpec::square(),
            2,
            10,
            Seed(0),
            &Tolerance::default(),
        );
        assert!(err.is_err());
    }

    #[test]
    fn sweep_rows_deterministic_order() {
        let cfg = base(SamplerSpec::gaussian(2, 1.0), 4, 200);
        let rows = sweep(&cfg, &[2, 4], &[1, 2]).unwrap();
        let cells: Vec<(usize, usize)> = rows.iter().map(|r| (r.d, r.n)).collect();
        assert_eq!(cells, vec![(1, 2), (1, 4), (2, 2), (2, 4)]);
        let rows2 = sweep(&cfg, &[2, 4], &[1, 2]).unwrap();
        for (a, b) in rows.iter().zip(&rows2) {
            assert_eq!(a.successes, b.successes);
        }
        assert!(rows.iter().all(|r| r.kind == "interpolation"));
    }

    #[test]
    fn csv_round_trip() {
        let cfg = base(SamplerSpec::gaussian(2, 1.0), 4, 100);
        let res = estimate_interpolation_prob(&cfg).unwrap();
        let rows = vec![SweepRow::membership(&cfg, &res)];
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(
            "kind,data_spec,query_spec,N,d,trials,successes,p_hat,ci_low,ci_high,nonconverged,seed,seconds"
        ));
        let back = read_csv(&buf[..]).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].successes, rows[0].successes);
        assert_eq!(back[0].data_spec, "gauss:d=2,sigma=1");
    }

    #[test]
    fn mismatched_dims_rejected() {
        let cfg = base(SamplerSpec::gaussian(3, 1.0), 4, 10)
            .with_query(SamplerSpec::zero(2));
        assert!(cfg.validate().is_err());
    }
}

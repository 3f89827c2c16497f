//! Command-line front end. All logic lives in the library; this binary only
//! parses arguments, dispatches, and serializes results.
//!
//! Exit codes: 0 success (membership: interpolation), 1 membership
//! extrapolation, 2 any error.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use hullscope::analytic;
use hullscope::geometry::{
    convex_position_count, test_membership, MembershipStatus, Tolerance,
};
use hullscope::manifest::RunManifest;
use hullscope::montecarlo::{
    estimate_convex_position_prob, estimate_interpolation_prob, sweep, write_csv, EstimateConfig,
    EstimateResult, SweepRow,
};
use hullscope::pipeline::{
    self, classical_mds, interpolation_proportion, make_selection, pca_explained,
    seeded_row_subset, SelectionStrategy,
};
use hullscope::samplers::{enumerate_hypercube, sample, SamplerKind, SamplerSpec, Seed};
use hullscope::PointSet;

#[derive(Parser)]
#[command(
    name = "hullscope",
    version,
    about = "Convex-hull membership, interpolation probabilities, and hull experiments"
)]
struct Cli {
    /// Worker threads (default: all cores). Results never depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide interpolation vs extrapolation for one query
    Membership(MembershipArgs),
    /// Monte-Carlo interpolation probability for one (spec, N) cell
    Estimate(EstimateArgs),
    /// Estimate over an (N, d) grid
    Sweep(SweepArgs),
    /// Monte-Carlo convex-position probability
    ConvexPosition(ConvexPositionArgs),
    /// Closed-form probabilities and bounds
    Analytic {
        #[command(subcommand)]
        op: AnalyticOp,
    },
    /// Interpolation fraction of a real test set against its train set
    Dataset(DatasetArgs),
    /// Explained-variance PCA of a point set
    Pca(PcaArgs),
    /// Classical MDS embedding of a point set
    Mds(MdsArgs),
    /// Convex position of all hypercube vertices, with optional 2-D MDS
    HypercubeAudit(AuditArgs),
    /// Johnson-Lindenstrauss embedding dimension and the dilemma check
    Jll(JllArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct TolArgs {
    /// Absolute width of the hull-boundary slack band
    #[arg(long, default_value_t = 1e-9)]
    tol_abs: f64,
    /// Relative width, scaled by the data magnitude
    #[arg(long, default_value_t = 1e-7)]
    tol_rel: f64,
    /// Iteration cap override (default max(10·N·d, 10000))
    #[arg(long)]
    max_iter: Option<usize>,
}

impl TolArgs {
    fn tolerance(&self) -> Tolerance {
        Tolerance {
            tau_abs: self.tol_abs,
            tau_rel: self.tol_rel,
            max_iter: self.max_iter,
            gap_tol: None,
        }
    }
}

#[derive(Args)]
struct MembershipArgs {
    /// Headerless CSV of data points, one row per point
    #[arg(long, conflicts_with = "spec")]
    data: Option<PathBuf>,
    /// Sampler spec, e.g. gauss:d=8,sigma=1 or cube:d=8
    #[arg(long)]
    spec: Option<String>,
    /// Rows to draw for --spec (cube specs default to all 2^d vertices)
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Headerless CSV holding exactly the query row
    #[arg(long, conflicts_with = "query_vertex")]
    query: Option<PathBuf>,
    /// Hold out row K of the data as the query
    #[arg(long)]
    query_vertex: Option<usize>,
    #[command(flatten)]
    tol: TolArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(long)]
    spec: String,
    /// Query distribution (default: same as --spec, drawn jointly)
    #[arg(long)]
    query_spec: Option<String>,
    /// Dataset size N per trial
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    tol: TolArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct SweepArgs {
    /// Sampler spec; its d= part may be omitted and comes from --d
    #[arg(long)]
    spec: String,
    #[arg(long)]
    query_spec: Option<String>,
    /// N grid: comma list or start:end:xK geometric, e.g. 2:1024:x2
    #[arg(long)]
    n: String,
    /// d grid, same syntax
    #[arg(long)]
    d: String,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    tol: TolArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct ConvexPositionArgs {
    #[arg(long)]
    spec: String,
    /// Points per trial (>= 3)
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    tol: TolArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand)]
enum AnalyticOp {
    /// Exact convex-position probability in a parallelogram
    ValtrParallelogram {
        #[arg(long)]
        n: usize,
    },
    /// Exact convex-position probability in a triangle
    ValtrTriangle {
        #[arg(long)]
        n: usize,
    },
    /// Exact probability that the origin is outside the hull of N symmetric points
    Wendel {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
    /// Sample count scale 2^(d/2)/d where hull coverage turns over
    BaranyThreshold {
        #[arg(long)]
        d: usize,
    },
    /// Which side of the threshold (N, d) falls on
    BaranyLimit {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
    /// Gaussian extrapolation probability for a N(0, sigma2·I) query
    Absorption {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        sigma2: f64,
        /// Gauss-Hermite nodes for the first refinement pass
        #[arg(long, default_value_t = 200)]
        nodes: usize,
    },
    /// Distortion-eps embedding dimension for n points
    Jll {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: f64,
    },
    /// Whether keeping hulls low-dimensional forces distance distortion
    JllDilemma {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        eps: f64,
    },
}

#[derive(Args)]
struct DatasetArgs {
    /// mnist or cifar10
    #[arg(long)]
    name: String,
    /// Dataset root (default: $HULLSCOPE_DATA, then ./data)
    #[arg(long)]
    root: Option<PathBuf>,
    /// Comma list of central-patch and/or smooth-subsample
    #[arg(long, default_value = "central-patch")]
    strategy: String,
    /// Target-dimension grid: comma list or start:end:xK
    #[arg(long)]
    d: String,
    #[arg(long, default_value_t = 10_000)]
    train_rows: usize,
    #[arg(long, default_value_t = 1_000)]
    test_rows: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    tol: TolArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PcaArgs {
    /// Headerless CSV of points
    #[arg(long, conflicts_with = "spec")]
    data: Option<PathBuf>,
    #[arg(long)]
    spec: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Explained-variance thresholds
    #[arg(long, default_value = "0.9,0.95,0.99")]
    thresholds: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MdsArgs {
    /// Headerless CSV of points
    #[arg(long, conflicts_with_all = ["spec", "cube"])]
    data: Option<PathBuf>,
    #[arg(long, conflicts_with = "cube")]
    spec: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// Embed the 2^d hypercube vertices
    #[arg(long)]
    cube: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Embedding dimension
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct AuditArgs {
    /// Hypercube dimension, 2..=12
    #[arg(long)]
    d: usize,
    /// Also embed to 2-D with classical MDS and recount
    #[arg(long)]
    mds: bool,
    #[command(flatten)]
    tol: TolArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct JllArgs {
    /// Point count: report the embedding dimension for n points
    #[arg(long, conflicts_with = "d")]
    n: Option<usize>,
    /// Hull dimension: report the dilemma verdict for dimension d
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("error: cannot size the worker pool: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Cmd) -> Result<u8> {
    match cmd {
        Cmd::Membership(a) => cmd_membership(a),
        Cmd::Estimate(a) => cmd_estimate(a).map(|_| 0),
        Cmd::Sweep(a) => cmd_sweep(a).map(|_| 0),
        Cmd::ConvexPosition(a) => cmd_convex_position(a).map(|_| 0),
        Cmd::Analytic { op } => cmd_analytic(op).map(|_| 0),
        Cmd::Dataset(a) => cmd_dataset(a).map(|_| 0),
        Cmd::Pca(a) => cmd_pca(a).map(|_| 0),
        Cmd::Mds(a) => cmd_mds(a).map(|_| 0),
        Cmd::HypercubeAudit(a) => cmd_hypercube_audit(a).map(|_| 0),
        Cmd::Jll(a) => cmd_jll(a).map(|_| 0),
    }
}

// ---------------------------------------------------------------------------
// shared plumbing

fn read_points_csv(path: &Path) -> Result<PointSet> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("cannot open {}", path.display()))?;
    let mut rows: Vec<f64> = Vec::new();
    let mut n = 0usize;
    let mut d = None;
    for (i, record) in rdr.records().enumerate() {
        let record = record.with_context(|| format!("{}: row {}", path.display(), i + 1))?;
        let width = record.len();
        match d {
            None => d = Some(width),
            Some(w) if w != width => bail!(
                "{}: row {} has {} fields, expected {}",
                path.display(),
                i + 1,
                width,
                w
            ),
            _ => {}
        }
        for (j, field) in record.iter().enumerate() {
            let v: f64 = field.parse().with_context(|| {
                format!("{}: row {} field {} is not a number", path.display(), i + 1, j + 1)
            })?;
            rows.push(v);
        }
        n += 1;
    }
    let d = d.ok_or_else(|| anyhow!("{}: no rows", path.display()))?;
    Ok(PointSet::from_rows(n, d, rows)?)
}

/// Comma list (`2,4,8`), geometric range (`2:1024:x2`), or single value.
fn parse_grid(s: &str) -> Result<Vec<usize>> {
    let parse_one = |tok: &str| -> Result<usize> {
        tok.trim()
            .parse::<usize>()
            .map_err(|_| anyhow!("`{tok}` is not a positive integer"))
    };
    let grid: Vec<usize> = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            bail!("grid `{s}` must look like start:end:xK");
        }
        let start = parse_one(parts[0])?;
        let end = parse_one(parts[1])?;
        let step = parts[2].trim();
        let factor = step
            .strip_prefix('x')
            .ok_or_else(|| anyhow!("grid step `{step}` must look like x2"))
            .and_then(parse_one)?;
        if factor < 2 {
            bail!("grid factor must be at least 2");
        }
        if start == 0 || end < start {
            bail!("grid `{s}` is empty");
        }
        let mut v = Vec::new();
        let mut x = start;
        while x <= end {
            v.push(x);
            match x.checked_mul(factor) {
                Some(next) => x = next,
                None => break,
            }
        }
        v
    } else {
        s.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(parse_one)
            .collect::<Result<_>>()?
    };
    if grid.is_empty() {
        bail!("grid `{s}` is empty");
    }
    if grid.iter().any(|&v| v == 0) {
        bail!("grid values must be at least 1");
    }
    Ok(grid)
}

/// Parse a spec whose `d=` may be omitted when a dimension grid supplies it.
fn parse_spec_template(s: &str, first_dim: usize) -> Result<SamplerSpec> {
    match s.parse::<SamplerSpec>() {
        Ok(spec) => Ok(spec),
        Err(first_err) => {
            if !s.contains("d=") {
                let sep = if s.contains(':') { "," } else { ":" };
                if let Ok(spec) = format!("{s}{sep}d={first_dim}").parse::<SamplerSpec>() {
                    return Ok(spec);
                }
            }
            Err(first_err.into())
        }
    }
}

fn emit_json(value: &serde_json::Value, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(path) => {
            std::fs::write(path, text + "\n")
                .with_context(|| format!("cannot write {}", path.display()))?;
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn emit_rows<T: serde::Serialize>(rows: &[T], out: Option<&Path>) -> Result<()> {
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        for row in rows {
            w.serialize(row)?;
        }
        w.flush()?;
    }
    match out {
        Some(path) => std::fs::write(path, buf)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{}", String::from_utf8(buf)?),
    }
    Ok(())
}

fn estimate_json(res: &EstimateResult, cfg: &EstimateConfig, manifest: &RunManifest) -> serde_json::Value {
    serde_json::json!({
        "kind": "interpolation",
        "data_spec": cfg.data_spec.to_string(),
        "query_spec": cfg.query().to_string(),
        "N": cfg.n_points,
        "d": cfg.data_spec.dim,
        "result": res,
        "manifest": manifest.to_json(),
    })
}

// ---------------------------------------------------------------------------
// subcommands

fn cmd_membership(a: MembershipArgs) -> Result<u8> {
    let tol = a.tol.tolerance();
    let (data, query, source): (PointSet, Vec<f64>, String) = match (&a.data, &a.spec) {
        (Some(path), None) => {
            let full = read_points_csv(path)?;
            match a.query_vertex {
                Some(k) => {
                    let (rest, q) = hold_out(&full, k)?;
                    (rest, q, format!("csv:{}", path.display()))
                }
                None => {
                    let qpath = a
                        .query
                        .as_ref()
                        .ok_or_else(|| anyhow!("--data needs --query or --query-vertex"))?;
                    let q = read_points_csv(qpath)?;
                    if q.len() != 1 {
                        bail!("query file must contain exactly one row, found {}", q.len());
                    }
                    (full, q.point(0).to_vec(), format!("csv:{}", path.display()))
                }
            }
        }
        (None, Some(spec_text)) => {
            let spec: SamplerSpec = spec_text.parse()?;
            let n = match a.n {
                Some(n) => n,
                None if spec.kind == SamplerKind::HypercubeVertices => 1usize << spec.dim,
                None => bail!("--spec needs --n (cube specs excepted)"),
            };
            let full = sample(&spec, n, Seed(a.seed))?;
            match a.query_vertex {
                Some(k) => {
                    let (rest, q) = hold_out(&full, k)?;
                    (rest, q, spec.to_string())
                }
                None => {
                    let qpath = a
                        .query
                        .as_ref()
                        .ok_or_else(|| anyhow!("--spec needs --query or --query-vertex"))?;
                    let q = read_points_csv(qpath)?;
                    if q.len() != 1 {
                        bail!("query file must contain exactly one row, found {}", q.len());
                    }
                    (full, q.point(0).to_vec(), spec.to_string())
                }
            }
        }
        _ => bail!("exactly one of --data and --spec is required"),
    };

    let mut manifest = RunManifest::new("membership")
        .param("data", &source)
        .param("n", data.len())
        .param("d", data.dim())
        .param("tol_abs", a.tol.tol_abs)
        .param("tol_rel", a.tol.tol_rel)
        .seed(a.seed);
    let query_arr = ndarray::Array1::from(query);
    let res = test_membership(&data, query_arr.view(), &tol)?;
    manifest.finish();
    let value = serde_json::json!({
        "result": res,
        "n": data.len(),
        "d": data.dim(),
        "manifest": manifest.to_json(),
    });
    emit_json(&value, a.out.as_deref())?;
    Ok(match res.status {
        MembershipStatus::Interpolation => 0,
        MembershipStatus::Extrapolation => 1,
    })
}

fn hold_out(full: &PointSet, k: usize) -> Result<(PointSet, Vec<f64>)> {
    if full.len() < 2 {
        bail!("hold-out needs at least 2 rows");
    }
    if k >= full.len() {
        bail!("--query-vertex {k} out of range for {} rows", full.len());
    }
    let arr = full.as_array();
    let query = arr.row(k).to_vec();
    let mut rest = Vec::with_capacity((full.len() - 1) * full.dim());
    for (i, row) in arr.rows().into_iter().enumerate() {
        if i != k {
            rest.extend(row.iter().copied());
        }
    }
    Ok((
        PointSet::from_rows(full.len() - 1, full.dim(), rest)?,
        query,
    ))
}

fn build_estimate_config(
    spec: &str,
    query_spec: Option<&str>,
    n: usize,
    trials: u64,
    seed: u64,
    tol: Tolerance,
) -> Result<EstimateConfig> {
    let data_spec: SamplerSpec = spec.parse()?;
    let mut cfg = EstimateConfig::new(data_spec, n, trials, Seed(seed));
    cfg.tol = tol;
    if let Some(q) = query_spec {
        cfg = cfg.with_query(q.parse()?);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_estimate(a: EstimateArgs) -> Result<()> {
    let cfg = build_estimate_config(
        &a.spec,
        a.query_spec.as_deref(),
        a.n,
        a.trials,
        a.seed,
        a.tol.tolerance(),
    )?;
    let mut manifest = RunManifest::new("estimate")
        .param("data_spec", cfg.data_spec)
        .param("query_spec", cfg.query())
        .param("n", cfg.n_points)
        .param("trials", cfg.trials)
        .seed(a.seed);
    let res = estimate_interpolation_prob(&cfg)?;
    manifest.finish();
    match a.format {
        Format::Json => emit_json(&estimate_json(&res, &cfg, &manifest), a.out.as_deref())?,
        Format::Csv => {
            emit_rows(&[SweepRow::membership(&cfg, &res)], a.out.as_deref())?;
            if let Some(path) = &a.out {
                manifest.write_alongside(path)?;
            }
        }
    }
    Ok(())
}

fn cmd_sweep(a: SweepArgs) -> Result<()> {
    let n_grid = parse_grid(&a.n).context("--n")?;
    let d_grid = parse_grid(&a.d).context("--d")?;
    let data_spec = parse_spec_template(&a.spec, d_grid[0])?;
    let mut base = EstimateConfig::new(data_spec, n_grid[0], a.trials, Seed(a.seed));
    base.tol = a.tol.tolerance();
    if let Some(q) = &a.query_spec {
        base = base.with_query(parse_spec_template(q, d_grid[0])?);
    }
    let mut manifest = RunManifest::new("sweep")
        .param("spec", &a.spec)
        .param("n", &a.n)
        .param("d", &a.d)
        .param("trials", a.trials)
        .seed(a.seed);
    let rows = sweep(&base, &n_grid, &d_grid)?;
    manifest.finish();
    match a.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(&rows, &mut buf)?;
            match &a.out {
                Some(path) => {
                    std::fs::write(path, buf)
                        .with_context(|| format!("cannot write {}", path.display()))?;
                    manifest.write_alongside(path)?;
                }
                None => print!("{}", String::from_utf8(buf)?),
            }
        }
        Format::Json => {
            let value = serde_json::json!({
                "rows": rows,
                "manifest": manifest.to_json(),
            });
            emit_json(&value, a.out.as_deref())?;
        }
    }
    Ok(())
}

fn cmd_convex_position(a: ConvexPositionArgs) -> Result<()> {
    let spec: SamplerSpec = a.spec.parse()?;
    let tol = a.tol.tolerance();
    let mut manifest = RunManifest::new("convex-position")
        .param("spec", spec)
        .param("n", a.n)
        .param("trials", a.trials)
        .seed(a.seed);
    let res = estimate_convex_position_prob(&spec, a.n, a.trials, Seed(a.seed), &tol)?;
    manifest.finish();
    match a.format {
        Format::Json => {
            let value = serde_json::json!({
                "kind": "convex_position",
                "spec": spec.to_string(),
                "n": a.n,
                "result": res,
                "manifest": manifest.to_json(),
            });
            emit_json(&value, a.out.as_deref())?;
        }
        Format::Csv => {
            emit_rows(&[SweepRow::convex_position(&spec, a.n, &res)], a.out.as_deref())?;
            if let Some(path) = &a.out {
                manifest.write_alongside(path)?;
            }
        }
    }
    Ok(())
}

fn cmd_analytic(op: AnalyticOp) -> Result<()> {
    let exact_value = |op: &str, params: serde_json::Value, p: &analytic::ExactProbability| {
        serde_json::json!({
            "op": op,
            "params": params,
            "exact": p.to_string(),
            "float": p.to_f64(),
        })
    };
    let value = match op {
        AnalyticOp::ValtrParallelogram { n } => {
            let p = analytic::valtr_parallelogram(n)?;
            exact_value("valtr-parallelogram", serde_json::json!({"n": n}), &p)
        }
        AnalyticOp::ValtrTriangle { n } => {
            let p = analytic::valtr_triangle(n)?;
            exact_value("valtr-triangle", serde_json::json!({"n": n}), &p)
        }
        AnalyticOp::Wendel { n, d } => {
            let p = analytic::wendel(n, d)?;
            exact_value("wendel", serde_json::json!({"n": n, "d": d}), &p)
        }
        AnalyticOp::BaranyThreshold { d } => {
            let t = analytic::barany_threshold(d)?;
            serde_json::json!({
                "op": "barany-threshold",
                "params": {"d": d},
                "threshold": t,
            })
        }
        AnalyticOp::BaranyLimit { n, d } => {
            let regime = analytic::barany_limit(n, d)?;
            serde_json::json!({
                "op": "barany-limit",
                "params": {"n": n, "d": d},
                "regime": regime.to_string(),
            })
        }
        AnalyticOp::Absorption { n, d, sigma2, nodes } => {
            let params = analytic::AbsorptionParams::new(n, d, sigma2)?;
            let cfg = analytic::QuadratureConfig {
                nodes,
                ..Default::default()
            };
            let p = analytic::gaussian_extrapolation_prob(&params, &cfg)?;
            serde_json::json!({
                "op": "absorption",
                "params": {"n": n, "d": d, "sigma2": sigma2},
                "float": p,
            })
        }
        AnalyticOp::Jll { n, eps } => {
            let dim = analytic::jll_dimension(n, eps)?;
            serde_json::json!({
                "op": "jll",
                "params": {"n": n, "eps": eps},
                "jll_dim": dim,
            })
        }
        AnalyticOp::JllDilemma { d, eps } => {
            let verdict = analytic::jll_dilemma(d, eps)?;
            serde_json::json!({
                "op": "jll-dilemma",
                "params": {"d": d, "eps": eps},
                "result": verdict,
            })
        }
    };
    emit_json(&value, None)
}

#[derive(serde::Serialize)]
struct DatasetRow {
    dataset: String,
    strategy: String,
    target_dim: usize,
    train_rows: usize,
    test_rows: usize,
    fraction: f64,
    seed: u64,
}

fn cmd_dataset(a: DatasetArgs) -> Result<()> {
    let root = a
        .root
        .clone()
        .or_else(pipeline::data_root)
        .ok_or_else(|| anyhow!("no dataset root: pass --root or set HULLSCOPE_DATA"))?;
    let ds = match a.name.as_str() {
        "mnist" => pipeline::ImageDataset::mnist_from_dir(&root)?,
        "cifar10" => pipeline::ImageDataset::cifar10_from_dir(&root)?,
        other => bail!("unknown dataset `{other}` (mnist or cifar10)"),
    };
    let strategies: Vec<SelectionStrategy> = a
        .strategy
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<SelectionStrategy>().map_err(Into::into))
        .collect::<Result<_>>()?;
    if strategies.is_empty() {
        bail!("--strategy must name at least one strategy");
    }
    let dims = parse_grid(&a.d).context("--d")?;
    let tol = a.tol.tolerance();
    let (h, w, c) = ds.image_shape();

    let n_train = ds.train_images.dim().0.min(a.train_rows);
    let n_test = ds.test_images.dim().0.min(a.test_rows);
    let train_rows = seeded_row_subset(
        ds.train_images.dim().0,
        n_train,
        Seed(hullscope::rng::mix(a.seed, 1)),
    )?;
    let test_rows = seeded_row_subset(
        ds.test_images.dim().0,
        n_test,
        Seed(hullscope::rng::mix(a.seed, 2)),
    )?;

    let mut manifest = RunManifest::new("dataset")
        .param("dataset", &ds.name)
        .param("root", root.display())
        .param("strategy", &a.strategy)
        .param("d", &a.d)
        .param("train_rows", n_train)
        .param("test_rows", n_test)
        .seed(a.seed);

    let mut rows = Vec::new();
    for &strategy in &strategies {
        for &target in &dims {
            let sel = make_selection(strategy, target, h, w, c)?;
            let train = sel.apply_batch(ds.train_images.view(), &train_rows)?;
            let test = sel.apply_batch(ds.test_images.view(), &test_rows)?;
            let rep = interpolation_proportion(&train, &test, &tol)?;
            rows.push(DatasetRow {
                dataset: ds.name.clone(),
                strategy: strategy.to_string(),
                target_dim: target,
                train_rows: n_train,
                test_rows: n_test,
                fraction: rep.fraction,
                seed: a.seed,
            });
        }
    }
    manifest.finish();
    emit_rows(&rows, a.out.as_deref())?;
    if let Some(path) = &a.out {
        manifest.write_alongside(path)?;
    }
    Ok(())
}

fn load_input_points(
    data: Option<&Path>,
    spec: Option<&str>,
    n: Option<usize>,
    seed: u64,
) -> Result<(PointSet, String)> {
    match (data, spec) {
        (Some(path), None) => Ok((read_points_csv(path)?, format!("csv:{}", path.display()))),
        (None, Some(text)) => {
            let spec: SamplerSpec = text.parse()?;
            let n = n.ok_or_else(|| anyhow!("--spec needs --n"))?;
            Ok((sample(&spec, n, Seed(seed))?, spec.to_string()))
        }
        _ => bail!("exactly one of --data and --spec is required"),
    }
}

fn cmd_pca(a: PcaArgs) -> Result<()> {
    let (points, source) = load_input_points(a.data.as_deref(), a.spec.as_deref(), a.n, a.seed)?;
    let thresholds: Vec<f64> = a
        .thresholds
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| anyhow!("threshold `{t}` is not a number"))
        })
        .collect::<Result<_>>()?;
    let mut manifest = RunManifest::new("pca")
        .param("data", &source)
        .param("thresholds", &a.thresholds)
        .seed(a.seed);
    let model = pca_explained(&points)?;
    let components: serde_json::Map<String, serde_json::Value> = thresholds
        .iter()
        .map(|&q| (format!("{q}"), model.components_for(q).into()))
        .collect();
    manifest.finish();
    let value = serde_json::json!({
        "eigenvalues": model.eigenvalues,
        "degenerate": model.degenerate,
        "components": components,
        "n": points.len(),
        "d": points.dim(),
        "manifest": manifest.to_json(),
    });
    emit_json(&value, a.out.as_deref())
}

fn cmd_mds(a: MdsArgs) -> Result<()> {
    let (points, source) = match a.cube {
        Some(d) => (enumerate_hypercube(d)?, format!("cube:d={d}")),
        None => load_input_points(a.data.as_deref(), a.spec.as_deref(), a.n, a.seed)?,
    };
    let mut manifest = RunManifest::new("mds")
        .param("data", &source)
        .param("k", a.k)
        .seed(a.seed);
    let embedded = classical_mds(&points, a.k)?;
    manifest.finish();
    match a.format {
        Format::Csv => {
            let rows: Vec<Vec<f64>> = embedded
                .as_array()
                .rows()
                .into_iter()
                .map(|r| r.to_vec())
                .collect();
            emit_rows(&rows, a.out.as_deref())?;
            if let Some(path) = &a.out {
                manifest.write_alongside(path)?;
            }
        }
        Format::Json => {
            let coords: Vec<Vec<f64>> = embedded
                .as_array()
                .rows()
                .into_iter()
                .map(|r| r.to_vec())
                .collect();
            let value = serde_json::json!({
                "coords": coords,
                "n": embedded.len(),
                "k": a.k,
                "manifest": manifest.to_json(),
            });
            emit_json(&value, a.out.as_deref())?;
        }
    }
    Ok(())
}

fn cmd_hypercube_audit(a: AuditArgs) -> Result<()> {
    if !(2..=12).contains(&a.d) {
        bail!("--d must be between 2 and 12, got {}", a.d);
    }
    let tol = a.tol.tolerance();
    let mut manifest = RunManifest::new("hypercube-audit")
        .param("d", a.d)
        .param("mds", a.mds);
    let cube = enumerate_hypercube(a.d)?;
    let high = convex_position_count(&cube, &tol)?;
    let mds2d = if a.mds {
        let flat = classical_mds(&cube, 2)?;
        Some(convex_position_count(&flat, &tol)?.in_hull_count)
    } else {
        None
    };
    manifest.finish();
    let value = serde_json::json!({
        "vertices": cube.len(),
        "in_hull_high_dim": high.in_hull_count,
        "in_hull_mds2d": mds2d,
        "manifest": manifest.to_json(),
    });
    emit_json(&value, a.out.as_deref())
}

fn cmd_jll(a: JllArgs) -> Result<()> {
    let value = match (a.n, a.d) {
        (Some(n), None) => {
            let dim = analytic::jll_dimension(n, a.eps)?;
            serde_json::json!({
                "op": "jll",
                "params": {"n": n, "eps": a.eps},
                "jll_dim": dim,
            })
        }
        (None, Some(d)) => {
            let verdict = analytic::jll_dilemma(d, a.eps)?;
            serde_json::json!({
                "op": "jll-dilemma",
                "params": {"d": d, "eps": a.eps},
                "result": verdict,
            })
        }
        _ => bail!("pass exactly one of --n (embedding dimension) or --d (dilemma)"),
    };
    emit_json(&value, a.out.as_deref())
}

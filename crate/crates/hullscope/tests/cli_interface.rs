//! End-to-end checks of the command-line binary: exit codes, output shapes
//! against the schema files shipped under schemas/, and rerun determinism.

use serde_json::Value;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hullscope"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn hullscope")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas")
}

fn load_schema(name: &str) -> Value {
    let path = schema_dir().join(name);
    serde_json::from_str(&fs::read_to_string(&path).unwrap_or_else(|e| {
        panic!("cannot read schema {}: {e}", path.display());
    }))
    .expect("schema file is JSON")
}

/// Just enough of JSON Schema for the shapes this tool emits: type, enum,
/// required, properties, items, and same-directory $ref.
fn validate(v: &Value, schema: &Value) -> Result<(), String> {
    if let Some(r) = schema.get("$ref").and_then(Value::as_str) {
        return validate(v, &load_schema(r));
    }
    if let Some(en) = schema.get("enum").and_then(Value::as_array) {
        if !en.contains(v) {
            return Err(format!("{v} not in enum {en:?}"));
        }
    }
    if let Some(t) = schema.get("type") {
        let names: Vec<&str> = match t {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().filter_map(Value::as_str).collect(),
            _ => vec![],
        };
        let ok = names.iter().any(|n| match *n {
            "object" => v.is_object(),
            "array" => v.is_array(),
            "string" => v.is_string(),
            "integer" => v.is_i64() || v.is_u64(),
            "number" => v.is_number(),
            "boolean" => v.is_boolean(),
            "null" => v.is_null(),
            _ => false,
        });
        if !ok {
            return Err(format!("expected {names:?}, got {v}"));
        }
    }
    if let (Some(req), Some(obj)) = (
        schema.get("required").and_then(Value::as_array),
        v.as_object(),
    ) {
        for name in req.iter().filter_map(Value::as_str) {
            if !obj.contains_key(name) {
                return Err(format!("missing required field `{name}`"));
            }
        }
    }
    if let (Some(props), Some(obj)) = (
        schema.get("properties").and_then(Value::as_object),
        v.as_object(),
    ) {
        for (k, sub) in props {
            if let Some(field) = obj.get(k) {
                validate(field, sub).map_err(|e| format!("{k}: {e}"))?;
            }
        }
    }
    if let (Some(items), Some(arr)) = (schema.get("items"), v.as_array()) {
        for (i, el) in arr.iter().enumerate() {
            validate(el, items).map_err(|e| format!("[{i}]: {e}"))?;
        }
    }
    Ok(())
}

fn assert_schema(v: &Value, schema_name: &str) {
    if let Err(e) = validate(v, &load_schema(schema_name)) {
        panic!("{schema_name} violation: {e}\nvalue: {v:#}");
    }
}

fn validate_csv(text: &str, schema_name: &str) -> Vec<csv::StringRecord> {
    let schema = load_schema(schema_name);
    let cols = schema["columns"].as_array().expect("csv schema has columns");
    let names: Vec<&str> = cols.iter().map(|c| c["name"].as_str().unwrap()).collect();
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(text.as_bytes());
    let mut records: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    if schema["header"].as_bool().unwrap_or(false) {
        assert!(!records.is_empty(), "missing header row");
        let header: Vec<&str> = records[0].iter().collect();
        assert_eq!(header, names, "header mismatch");
        records.remove(0);
    }
    for (ri, rec) in records.iter().enumerate() {
        assert_eq!(rec.len(), cols.len(), "row {ri} width");
        for (ci, cell) in rec.iter().enumerate() {
            match cols[ci]["type"].as_str().unwrap() {
                "integer" => {
                    cell.parse::<i64>()
                        .unwrap_or_else(|_| panic!("row {ri} col {} not an integer: {cell}", names[ci]));
                }
                "number" => {
                    cell.parse::<f64>()
                        .unwrap_or_else(|_| panic!("row {ri} col {} not a number: {cell}", names[ci]));
                }
                _ => {}
            }
        }
    }
    records
}

// ---------------------------------------------------------------------------

#[test]
fn membership_exit_codes_and_shape() {
    let dir = tempfile::tempdir().unwrap();
    let points = dir.path().join("points.csv");
    fs::write(&points, "0,0\n1,0\n1,1\n0,1\n0.5,0.5\n").unwrap();
    let inside = dir.path().join("inside.csv");
    fs::write(&inside, "0.5,0.5\n").unwrap();
    let outside = dir.path().join("outside.csv");
    fs::write(&outside, "3,0.5\n").unwrap();

    let out = run(&[
        "membership",
        "--data",
        points.to_str().unwrap(),
        "--query",
        inside.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_schema(&v, "membership.schema.json");
    assert_eq!(v["result"]["status"], "Interpolation");
    assert!(v["result"]["coefficients"].is_array());
    assert!(v["result"]["witness"].is_null());

    let out = run(&[
        "membership",
        "--data",
        points.to_str().unwrap(),
        "--query",
        outside.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_schema(&v, "membership.schema.json");
    assert_eq!(v["result"]["status"], "Extrapolation");
    // decision mode stops at a separation certificate, so the reported
    // distance is an upper bound on the true hull distance of 2.0
    let dist = v["result"]["distance"].as_f64().unwrap();
    assert!((2.0 - 1e-9..=3.1).contains(&dist), "distance {dist}");
    assert!(v["result"]["witness"].is_array());
}

#[test]
fn membership_cube_vertex_is_extreme() {
    let out = run(&["membership", "--spec", "cube:d=8", "--query-vertex", "0"]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_schema(&v, "membership.schema.json");
    assert_eq!(v["n"], 255);
    assert_eq!(v["d"], 8);
}

#[test]
fn bad_inputs_exit_2() {
    for args in [
        vec!["membership", "--spec", "torus:d=3", "--query-vertex", "0"],
        vec!["membership", "--spec", "gauss:d=2,sigma=1"],
        vec!["sweep", "--spec", "gauss", "--n", "5:2:x2", "--d", "2"],
        vec!["hypercube-audit", "--d", "13"],
        vec!["hypercube-audit", "--d", "1"],
        vec!["jll", "--n", "100", "--eps", "1.5"],
        vec!["dataset", "--name", "mnist", "--root", "/nonexistent", "--d", "4"],
    ] {
        let out = run(&args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "args {args:?}: stderr {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!out.stderr.is_empty(), "args {args:?} gave no error message");
    }
}

#[test]
fn estimate_json_is_deterministic() {
    let args = [
        "estimate",
        "--spec",
        "gauss:d=2,sigma=1",
        "--n",
        "8",
        "--trials",
        "400",
        "--seed",
        "7",
    ];
    let a = stdout_json(&run(&args));
    let b = stdout_json(&run(&args));
    assert_schema(&a, "estimate.schema.json");
    assert_eq!(a["kind"], "interpolation");
    assert_eq!(a["result"]["successes"], b["result"]["successes"]);
    assert_eq!(a["result"]["p_hat"], b["result"]["p_hat"]);
    assert_eq!(a["N"], 8);
    let lo = a["result"]["ci_low"].as_f64().unwrap();
    let hi = a["result"]["ci_high"].as_f64().unwrap();
    assert!(0.0 <= lo && lo <= hi && hi <= 1.0);
}

#[test]
fn sweep_csv_matches_schema_and_grid() {
    let out = run(&[
        "sweep", "--spec", "gauss", "--d", "2,4", "--n", "2:16:x2", "--trials", "50", "--seed", "7",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows = validate_csv(&text, "sweep.csv.schema.json");
    assert_eq!(rows.len(), 8, "2 dims x 4 sizes");
    // d-major ordering with N inner
    let cells: Vec<(String, String)> = rows
        .iter()
        .map(|r| (r[4].to_string(), r[3].to_string()))
        .collect();
    let want: Vec<(String, String)> = [
        (2, 2), (2, 4), (2, 8), (2, 16),
        (4, 2), (4, 4), (4, 8), (4, 16),
    ]
    .iter()
    .map(|&(d, n)| (d.to_string(), n.to_string()))
    .collect();
    assert_eq!(cells, want);
    // the sampler spec inherits each grid dimension
    assert_eq!(&rows[0][1], "gauss:d=2,sigma=1");
    assert_eq!(&rows[4][1], "gauss:d=4,sigma=1");
}

#[test]
fn sweep_json_and_out_file_with_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("rows.csv");
    let out = run(&[
        "sweep",
        "--spec",
        "ball",
        "--d",
        "2",
        "--n",
        "4,8",
        "--trials",
        "40",
        "--seed",
        "1",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&out_path).unwrap();
    assert_eq!(validate_csv(&text, "sweep.csv.schema.json").len(), 2);
    let manifest_path = dir.path().join("rows.csv.manifest.json");
    let manifest: Value = serde_json::from_str(&fs::read_to_string(&manifest_path).unwrap()).unwrap();
    assert_schema(&manifest, "manifest.schema.json");
    assert_eq!(manifest["subcommand"], "sweep");
    assert!(manifest["finished"].is_string());

    let out = run(&[
        "sweep", "--spec", "ball", "--d", "2", "--n", "4,8", "--trials", "40", "--seed", "1",
        "--format", "json",
    ]);
    let v = stdout_json(&out);
    assert_schema(&v, "sweep.schema.json");
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn sweep_rerun_identical_up_to_timing() {
    let args = [
        "sweep", "--spec", "gauss", "--d", "3", "--n", "4,8", "--trials", "60", "--seed", "11",
        "--format", "json",
    ];
    let a = stdout_json(&run(&args));
    let b = stdout_json(&run(&args));
    let strip = |v: &Value| -> Vec<Value> {
        v["rows"]
            .as_array()
            .unwrap()
            .iter()
            .map(|row| {
                let mut row = row.clone();
                row.as_object_mut().unwrap().remove("seconds");
                row
            })
            .collect()
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn analytic_exact_strings() {
    let v = stdout_json(&run(&["analytic", "valtr-triangle", "--n", "4"]));
    assert_schema(&v, "analytic.schema.json");
    assert_eq!(v["exact"], "2/3");
    assert!((v["float"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-15);

    let v = stdout_json(&run(&["analytic", "valtr-parallelogram", "--n", "5"]));
    assert_eq!(v["exact"], "49/144");

    let v = stdout_json(&run(&["analytic", "wendel", "--n", "6", "--d", "3"]));
    assert_eq!(v["exact"], "1/2");

    let v = stdout_json(&run(&[
        "analytic", "absorption", "--n", "10", "--d", "3", "--sigma2", "1",
    ]));
    assert_schema(&v, "analytic.schema.json");
    let p = v["float"].as_f64().unwrap();
    assert!(p > 0.0 && p < 1.0);

    let v = stdout_json(&run(&["analytic", "barany-limit", "--n", "1000000", "--d", "4"]));
    assert_schema(&v, "analytic.schema.json");
    assert_eq!(v["regime"], "1");
}

#[test]
fn jll_reference_values() {
    let v = stdout_json(&run(&["jll", "--n", "10000"]));
    assert_schema(&v, "analytic.schema.json");
    assert_eq!(v["jll_dim"], 7895);

    let v = stdout_json(&run(&["jll", "--d", "128"]));
    assert_schema(&v, "analytic.schema.json");
    assert_eq!(v["result"]["dilemma"], true);

    let out = run(&["jll", "--n", "100", "--d", "4"]);
    assert_eq!(out.status.code(), Some(2), "both selectors at once must fail");
}

#[test]
fn hypercube_audit_shape() {
    let v = stdout_json(&run(&["hypercube-audit", "--d", "3", "--mds"]));
    assert_schema(&v, "hypercube-audit.schema.json");
    assert_eq!(v["vertices"], 8);
    assert_eq!(v["in_hull_high_dim"], 0);
    assert!(v["in_hull_mds2d"].as_u64().unwrap() >= 1);

    let v = stdout_json(&run(&["hypercube-audit", "--d", "3"]));
    assert!(v["in_hull_mds2d"].is_null());
}

#[test]
fn mds_csv_rows() {
    let out = run(&["mds", "--cube", "3", "--k", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 8);
    for row in rows {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells.len(), 2);
        for c in cells {
            c.parse::<f64>().unwrap();
        }
    }
}

#[test]
fn pca_recovers_intrinsic_dimension() {
    let v = stdout_json(&run(&[
        "pca", "--spec", "affine:d=12,dstar=3", "--n", "40", "--seed", "3",
    ]));
    assert_schema(&v, "pca.schema.json");
    assert_eq!(v["components"]["0.99"], 3);
    assert_eq!(v["d"], 12);
    assert_eq!(v["degenerate"], false);
}

#[test]
fn convex_position_json() {
    let v = stdout_json(&run(&[
        "convex-position", "--spec", "square:d=2", "--n", "4", "--trials", "300", "--seed", "1",
    ]));
    assert_schema(&v, "estimate.schema.json");
    assert_eq!(v["kind"], "convex_position");
    let p = v["result"]["p_hat"].as_f64().unwrap();
    // true value 25/36; 300 trials stay well inside +/- 0.09
    assert!((p - 25.0 / 36.0).abs() < 0.09, "p_hat {p}");
}

#[test]
fn dataset_runs_on_idx_files() {
    use hullscope::pipeline::{write_idx_images, write_idx_labels};
    use ndarray::Array3;

    let dir = tempfile::tempdir().unwrap();
    let train = Array3::from_shape_fn((40, 10, 10), |(n, i, j)| {
        ((n * 31 + i * 7 + j * 3) % 251) as u8
    });
    let test = Array3::from_shape_fn((12, 10, 10), |(n, i, j)| {
        ((n * 17 + i * 5 + j * 11) % 251) as u8
    });
    write_idx_images(&dir.path().join("train-images-idx3-ubyte"), &train).unwrap();
    write_idx_labels(&dir.path().join("train-labels-idx1-ubyte"), &vec![0u8; 40]).unwrap();
    write_idx_images(&dir.path().join("t10k-images-idx3-ubyte"), &test).unwrap();
    write_idx_labels(&dir.path().join("t10k-labels-idx1-ubyte"), &vec![0u8; 12]).unwrap();

    let out_path = dir.path().join("fractions.csv");
    let out = bin()
        .env("HULLSCOPE_DATA", dir.path())
        .args([
            "dataset",
            "--name",
            "mnist",
            "--strategy",
            "central-patch,smooth-subsample",
            "--d",
            "2,4",
            "--train-rows",
            "30",
            "--test-rows",
            "10",
            "--seed",
            "3",
            "--out",
            out_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&out_path).unwrap();
    let rows = validate_csv(&text, "dataset.csv.schema.json");
    assert_eq!(rows.len(), 4, "2 strategies x 2 dims");
    for rec in &rows {
        assert_eq!(&rec[0], "mnist");
        let frac: f64 = rec[5].parse().unwrap();
        assert!((0.0..=1.0).contains(&frac));
    }
    let manifest: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("fractions.csv.manifest.json")).unwrap())
            .unwrap();
    assert_schema(&manifest, "manifest.schema.json");
    assert_eq!(manifest["subcommand"], "dataset");
}

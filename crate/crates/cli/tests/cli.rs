use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use toppr::io::write_npy;
use toppr::synth::{self, ScenarioKind, ScenarioSpec};
use toppr::FeatureMatrix;

fn toppr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toppr"))
        .args(args)
        .env_remove("TOPPR_THREADS")
        .output()
        .expect("failed to run toppr")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(out)).unwrap()
}

fn save(dir: &Path, name: &str, m: &FeatureMatrix) -> PathBuf {
    let path = dir.join(name);
    write_npy(&path, m).unwrap();
    path
}

fn gaussian(n: usize, d: usize, seed: u64) -> FeatureMatrix {
    let spec = ScenarioSpec::new(ScenarioKind::Shift).sizes(n, n).dim(d).outlier(None).seed(seed);
    synth::gen_shift_pair(&spec).unwrap().0
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn score_identical_file_is_perfect_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = save(dir.path(), "a.npy", &gaussian(300, 16, 1));
    let a = a.to_str().unwrap();
    let args = ["score", "--real", a, "--fake", a, "--seed", "1", "--proj-dim", "8"];
    let first = toppr(&args);
    let doc = json(&first);
    assert_eq!(doc["top_p"], 1.0);
    assert_eq!(doc["top_r"], 1.0);
    assert_eq!(doc["schema"], "toppr/1");
    assert_eq!(doc["proj_dim"], 8);
    assert!(stdout(&first).contains("\"top_p\":1.0"));
    assert_eq!(toppr(&args).stdout, first.stdout);
}

#[test]
fn score_writes_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let a = save(dir.path(), "a.npy", &gaussian(200, 8, 2));
    let b = save(dir.path(), "b.npy", &gaussian(200, 8, 3));
    let out = dir.path().join("report.json");
    let run = toppr(&[
        "score",
        "--real",
        a.to_str().unwrap(),
        "--fake",
        b.to_str().unwrap(),
        "--proj-dim",
        "none",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(run.status.success());
    assert!(run.stdout.is_empty());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(doc["proj_dim"].is_null());
    for key in ["top_p", "top_r", "f1"] {
        let v = doc[key].as_f64().unwrap();
        assert!((0.0..=1.0).contains(&v));
    }
}

#[test]
fn mismatched_columns_exit_3_naming_both() {
    let dir = tempfile::tempdir().unwrap();
    let a = save(dir.path(), "a.npy", &gaussian(50, 6, 1));
    let b = save(dir.path(), "b.npy", &gaussian(50, 4, 1));
    let run = toppr(&["score", "--real", a.to_str().unwrap(), "--fake", b.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(3));
    let err = String::from_utf8_lossy(&run.stderr);
    assert!(err.contains('6') && err.contains('4'), "{err}");
}

#[test]
fn missing_and_malformed_files_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.npy");
    std::fs::write(&junk, b"not an array").unwrap();
    let junk = junk.to_str().unwrap();
    assert_eq!(toppr(&["score", "--real", junk, "--fake", junk]).status.code(), Some(3));
    let missing = dir.path().join("missing.npy");
    let missing = missing.to_str().unwrap();
    assert_eq!(toppr(&["score", "--real", missing, "--fake", missing]).status.code(), Some(3));
}

#[test]
fn degenerate_data_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let flat = save(dir.path(), "flat.npy", &FeatureMatrix::new(40, 3, vec![1.0; 120]).unwrap());
    let flat = flat.to_str().unwrap();
    let run = toppr(&["score", "--real", flat, "--fake", flat, "--proj-dim", "none"]);
    assert_eq!(run.status.code(), Some(4));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(toppr(&["score", "--bogus-flag"]).status.code(), Some(2));
    assert_eq!(toppr(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(toppr(&["synth", "--scenario", "nope"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let a = save(dir.path(), "a.npy", &gaussian(30, 4, 1));
    let a = a.to_str().unwrap();
    let run = toppr(&["baseline", "--real", a, "--fake", a, "--metric", "bogus"]);
    assert_eq!(run.status.code(), Some(2));
    let run = toppr(&["score", "--real", a, "--fake", a, "--alpha", "1.5", "--proj-dim", "none"]);
    assert_eq!(run.status.code(), Some(2));
}

#[test]
fn baseline_density_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let real = dir.path().join("real.csv");
    let fake = dir.path().join("fake.csv");
    std::fs::write(&real, "0\n2\n").unwrap();
    std::fs::write(&fake, "1\n").unwrap();
    let run = toppr(&[
        "baseline",
        "--real",
        real.to_str().unwrap(),
        "--fake",
        fake.to_str().unwrap(),
        "--metric",
        "dc",
        "--k",
        "1",
        "--dc-variant",
        "paper-literal",
    ]);
    let doc = json(&run);
    assert_eq!(doc["density"], 2.0);
    assert_eq!(doc["coverage"], 1.0);
    assert_eq!(doc["dc_variant"], "paper-literal");
    assert!(doc.get("precision").is_none());
}

#[test]
fn baseline_pr_identical_sets() {
    let dir = tempfile::tempdir().unwrap();
    let a = save(dir.path(), "a.npy", &gaussian(100, 5, 4));
    let a = a.to_str().unwrap();
    let doc = json(&toppr(&["baseline", "--real", a, "--fake", a, "--metric", "pr"]));
    assert_eq!(doc["precision"], 1.0);
    assert_eq!(doc["recall"], 1.0);
    assert_eq!(doc["k"], 5);
}

#[test]
fn synth_shift_has_one_row_per_step() {
    let run = toppr(&[
        "synth", "--scenario", "shift", "--steps", "13", "--n", "120", "--d", "8", "--proj-dim", "4",
    ]);
    assert!(run.status.success());
    let (header, rows) = csv_rows(&stdout(&run));
    assert_eq!(header, ["step", "mu", "top_p", "top_r", "f1"]);
    assert_eq!(rows.len(), 13);
    assert_eq!(rows[0][1], -1.0);
    assert_eq!(rows[12][1], 1.0);
}

#[test]
fn synth_sim_drop_reference_line() {
    let run = toppr(&[
        "synth", "--scenario", "sim-drop", "--n", "140", "--d", "8", "--proj-dim", "4", "--threads", "1",
    ]);
    assert!(run.status.success());
    let (header, rows) = csv_rows(&stdout(&run));
    let col = header.iter().position(|h| h == "ground_truth_diversity").unwrap();
    assert_eq!(rows.len(), 11);
    for (i, row) in rows.iter().enumerate() {
        // seven balanced modes, six of them thinned together
        let expect = 1.0 - (i as f64 / 10.0) * 6.0 / 7.0;
        assert!((row[col] - expect).abs() < 1e-12, "step {i}: {}", row[col]);
    }
}

#[test]
fn synth_scatter_rho_column() {
    let run = toppr(&[
        "synth",
        "--scenario",
        "scatter",
        "--rho-max",
        "0.3",
        "--n",
        "100",
        "--d",
        "8",
        "--proj-dim",
        "4",
        "--with-baselines",
    ]);
    assert!(run.status.success());
    let (header, rows) = csv_rows(&stdout(&run));
    assert_eq!(header.len(), 9);
    let rho: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    assert_eq!(rho.first(), Some(&0.0));
    assert!((rho.last().unwrap() - 0.3).abs() < 1e-12);
    assert!(rho.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn threads_env_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let a = save(dir.path(), "a.npy", &gaussian(80, 4, 5));
    let a = a.to_str().unwrap();
    let run = Command::new(env!("CARGO_BIN_EXE_toppr"))
        .args(["score", "--real", a, "--fake", a, "--proj-dim", "none"])
        .env("TOPPR_THREADS", "2")
        .output()
        .unwrap();
    assert!(run.status.success());
}

#[test]
fn rank_reports_mean_hamming() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, p: f64, r: f64, f1: f64| {
        let path = dir.path().join(name);
        let doc = serde_json::json!({"schema": "toppr/1", "kind": "score", "top_p": p, "top_r": r, "f1": f1});
        std::fs::write(&path, doc.to_string()).unwrap();
        path.to_str().unwrap().to_string()
    };
    let a = write("a.json", 0.9, 0.9, 0.9);
    let b = write("b.json", 0.5, 0.5, 0.5);
    let c = write("c.json", 0.1, 0.1, 0.1);
    let doc = json(&toppr(&["rank", &a, &b, &c]));
    assert_eq!(doc["mean_hamming"], 0.0);
    assert_eq!(doc["rankings"][0]["order"], serde_json::json!(["a", "b", "c"]));

    let d = write("d.json", 0.1, 0.95, 0.5);
    let doc = json(&toppr(&["rank", &a, &d, "--metrics", "top_p,top_r"]));
    assert_eq!(doc["mean_hamming"], 2.0);

    let run = toppr(&["rank", &a, &b, "--metrics", "top_p,density"]);
    assert_eq!(run.status.code(), Some(3));
    let foreign = dir.path().join("foreign.json");
    std::fs::write(&foreign, r#"{"top_p": 1.0}"#).unwrap();
    let run = toppr(&["rank", &a, foreign.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(3));
}

use std::process::{Command, Output};

fn rayleigh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rayleigh"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn sweep_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let config = dir.path().join("sweep.json");
    let text = format!(
        r#"{{"dim": 1, "bandlimit": 10, "separation_grid": [1.0, 2.0], "count_grid": [2, 3],
            "generator": "random", "seeds": [1], "tau": 0.2, "output_path": {:?}}}"#,
        csv.to_str().unwrap()
    );
    std::fs::write(&config, text).unwrap();
    let out = rayleigh(&["sweep", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(rows.lines().count(), 5);
    let svg = std::fs::read_to_string(dir.path().join("sweep.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
}

#[test]
fn sweep_rejects_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.json");
    std::fs::write(&config, r#"{"dim": 1}"#).unwrap();
    assert_eq!(rayleigh(&["sweep", "--config", config.to_str().unwrap()]).status.code(), Some(1));
    let missing = dir.path().join("missing.json");
    assert_eq!(rayleigh(&["sweep", "--config", missing.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn bound_check_passes_in_one_dimension() {
    let out = rayleigh(&[
        "bound-check", "--dim", "1", "--tau", "0.2", "--n", "10", "20", "--trials", "5", "--seed", "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["total"], 10);
    assert_eq!(report["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn bound_check_needs_positive_tau() {
    let out = rayleigh(&["bound-check", "--dim", "1", "--tau", "0", "--n", "10"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn minorant_certify_and_bound() {
    let out = rayleigh(&["minorant", "--dim", "2", "--tau", "0.2", "--certify", "--resolution", "60", "--n", "10"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("\"passed\": true"));
    assert!(text.contains("bound"));
}

#[test]
fn minorant_profile_export() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("psi.csv");
    let out = rayleigh(&[
        "minorant", "--dim", "1", "--tau", "0.1", "--profile", "psi", "--out",
        path.to_str().unwrap(), "--samples", "33",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some("radius,value"));
    assert_eq!(text.lines().count(), 34);
}

#[test]
fn minorant_rejects_unknown_profile_and_bad_dim() {
    let out = rayleigh(&["minorant", "--dim", "1", "--tau", "0.1", "--profile", "gauss", "--out", "x.csv"]);
    assert_ne!(out.status.code(), Some(0));
    let out = rayleigh(&["minorant", "--dim", "5", "--tau", "0.1", "--certify"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn fim_reports_lambda_min_and_crb() {
    let nodes = r#"{"dim": 1, "points": [[0.1], [0.4]]}"#;
    let weights = "[[1.0, 0.0], [0.5, 0.5]]";
    let out = rayleigh(&["fim", "--nodes", nodes, "--weights", weights, "--n", "8", "--delta", "0.1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let record: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(record["lambda_min"].as_f64().unwrap() > 0.0);
    assert_eq!(record["crb_diag"].as_array().unwrap().len(), 4);
}

#[test]
fn fim_reads_files_and_real_weights() {
    let dir = tempfile::tempdir().unwrap();
    let nodes = dir.path().join("nodes.json");
    std::fs::write(&nodes, r#"{"dim": 2, "points": [[0.1, 0.2], [0.6, 0.7]]}"#).unwrap();
    let out = rayleigh(&[
        "fim", "--nodes", nodes.to_str().unwrap(), "--weights", "[1, 2]", "--n", "5", "--delta", "1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let record: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(record["crb_diag"].as_array().unwrap().len(), 6);
}

#[test]
fn fim_rejects_mismatched_weights() {
    let out = rayleigh(&[
        "fim", "--nodes", r#"{"dim": 1, "points": [[0.1]]}"#, "--weights", "[1, 2]", "--n", "5", "--delta", "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_specset"))
        .args(args)
        .output()
        .expect("failed to launch specset")
}

fn write_nilpotent(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("nilpotent.json");
    fs::write(
        &path,
        r#"{"dim":2,"re":[[0.0,2.0],[0.0,0.0]],"im":[[0.0,0.0],[0.0,0.0]]}"#,
    )
    .unwrap();
    path
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = run(&["verify", "--trials", "3", "--frobulate"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_check_lists_valid_names() {
    let out = run(&["verify", "--trials", "3", "--checks", "lemma3"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    for name in ["lemma1", "lemma2", "theorem", "radius", "sector", "bs"] {
        assert!(err.contains(name), "missing {name} in: {err}");
    }
}

#[test]
fn zero_trials_rejected() {
    let out = run(&["verify", "--trials", "0", "--checks", "lemma1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_clean_run_reports_zero_violations() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "verify",
        "--checks",
        "lemma1,radius",
        "--trials",
        "4",
        "--seed",
        "7",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert!(summary.contains("check,trials,violations"));
    for line in summary.lines().skip(2) {
        let violations: u64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(violations, 0, "violating line: {line}");
    }

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["command"], "verify");
    assert_eq!(manifest["seed"], 7);
    assert!(manifest["timestamp"].is_string());

    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("lemma1.json")).unwrap())
            .unwrap();
    assert_eq!(report["manifest"], "manifest.json");
    assert_eq!(report["report"]["violations"], 0);
}

#[test]
fn verify_rerun_is_byte_identical() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    for d in [&d1, &d2] {
        let out = run(&[
            "verify",
            "--checks",
            "lemma2",
            "--trials",
            "3",
            "--seed",
            "11",
            "--out",
            d.path().to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let a = fs::read(d1.path().join("lemma2.json")).unwrap();
    let b = fs::read(d2.path().join("lemma2.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn range_csv_nilpotent_points_have_radius_half() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write_nilpotent(dir.path());
    let csv_path = dir.path().join("range.csv");
    let out = run(&[
        "range",
        "--matrix",
        matrix.to_str().unwrap(),
        "--angles",
        "64",
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(&csv_path).unwrap();
    let mut rows = 0;
    for line in csv.lines() {
        if line.starts_with('#') || line.starts_with("theta") {
            continue;
        }
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols.len(), 4);
        // W([[0,2],[0,0]]) is the closed disk of radius 1, so the support
        // is 1 in every direction and boundary points sit on |z| = 1
        assert!((cols[1] - 1.0).abs() < 1e-9);
        assert!((cols[2].hypot(cols[3]) - 1.0).abs() < 1e-9);
        rows += 1;
    }
    assert_eq!(rows, 64);
}

#[test]
fn range_svg_has_three_labeled_paths() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write_nilpotent(dir.path());
    let svg_path = dir.path().join("range.svg");
    let out = run(&[
        "range",
        "--matrix",
        matrix.to_str().unwrap(),
        "--angles",
        "64",
        "--svg",
        svg_path.to_str().unwrap(),
        "--out",
        dir.path().join("range.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let svg = fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("<path").count(), 3);
    for id in ["numrange", "domain", "fbar-hull"] {
        assert!(svg.contains(&format!("id=\"{id}\"")), "missing path {id}");
    }
}

#[test]
fn range_nodes_csv_has_expected_columns() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write_nilpotent(dir.path());
    let nodes_path = dir.path().join("nodes.csv");
    let out = run(&[
        "range",
        "--matrix",
        matrix.to_str().unwrap(),
        "--nodes-out",
        nodes_path.to_str().unwrap(),
        "--out",
        dir.path().join("range.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(&nodes_path).unwrap();
    assert!(csv.contains("theta,sig_re,sig_im,nu_re,nu_im,weight,curvature"));
    let data_rows = csv
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("theta"))
        .count();
    assert_eq!(data_rows, 512);
}

#[test]
fn search_small_run_writes_result() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "search",
        "--dim",
        "2",
        "--degree",
        "1",
        "--restarts",
        "1",
        "--iters",
        "5",
        "--seed",
        "3",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let body: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("search.json")).unwrap())
            .unwrap();
    let ratio = body["result"]["best_ratio"].as_f64().unwrap();
    // restart 0 seeds the nilpotent extremal pair, so even 5 iterations
    // cannot fall below its ratio
    assert!(ratio >= 2.0 - 1e-6, "ratio {ratio}");
    assert!(ratio <= 1.0 + std::f64::consts::SQRT_2 + 1e-6);
    let history = fs::read_to_string(dir.path().join("history.csv")).unwrap();
    assert!(history.contains("iteration,ratio"));
}

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn strata(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strata"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

#[test]
fn analyze_reports_ratio() {
    let out = strata(&["analyze", "--weil", "529,-138,32,-6,1", "--q", "23", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["strata"][0]["ratio_exact"], "255024");
    // pi-bar = 23/pi has denominators on the power basis
    assert_eq!(v["minimal_order"]["den"], 23);
    assert_eq!(v["spec"]["n"], 2);

    let text = strata(&["analyze", "--weil", "529,-138,32,-6,1", "--q", "23"]);
    assert_eq!(text.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&text.stdout).contains("ratio exact = 255024"));
}

#[test]
fn analyze_elliptic_count() {
    let out = strata(&["analyze", "--weil", "5,-3,1", "--q", "5", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["strata"][0]["exact_count"], "1");
}

#[test]
fn analyze_exit_codes() {
    assert_eq!(
        strata(&["analyze", "--weil", "4,0,5,0,1", "--q", "2"]).status.code(),
        Some(3)
    );
    // wrong functional equation
    assert_eq!(
        strata(&["analyze", "--weil", "4,1,5,0,1", "--q", "2"]).status.code(),
        Some(3)
    );
    assert_eq!(
        strata(&["analyze", "--weil", "4,a,1", "--q", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        strata(&["analyze", "--weil", "5,-3,1", "--q", "10"]).status.code(),
        Some(2)
    );
    assert_eq!(
        strata(&["analyze", "--weil", "5,-3,1", "--q", "5", "--frobnicate"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(strata(&["bogus"]).status.code(), Some(2));
}

#[test]
fn census_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("census.csv");
    let minus = dir.path().join("minus.json");
    let out = strata(&[
        "ec-census",
        "--p",
        "101",
        "--bins",
        "20",
        "--out",
        csv.to_str().unwrap(),
        "--minus-out",
        minus.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let summary = json(&out);
    assert_eq!(summary["class_count"], 40);
    assert_eq!(summary["histogram"].as_array().unwrap().len(), 20);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 41);
    assert!(text.starts_with("t,delta,H,normalized_trace\n"));
    let scan: Value = serde_json::from_str(&std::fs::read_to_string(&minus).unwrap()).unwrap();
    assert_eq!(scan.as_array().unwrap().len(), 40);
}

#[test]
fn census_io_failure() {
    let out = strata(&["ec-census", "--p", "101", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn convenient_on_shipped_example() {
    let out = strata(&[
        "convenient",
        "--order-file",
        data("ex-inconvenient.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["is_convenient"], false);
    assert_eq!(v["pure_imaginary_index"], 2);
    assert_eq!(v["stable_under_conjugation"], true);
    assert_eq!(v["real_subring_gorenstein"], true);
    assert_eq!(v["is_gorenstein"], true);
}

#[test]
fn convenient_rejects_bad_files() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"f": [361, -76, 10, -4, 1], "q": 19, "den": 1, "basis": [[1, 0, 0, 0]]}"#,
    )
    .unwrap();
    assert_eq!(
        strata(&["convenient", "--order-file", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    std::fs::write(&bad, "not json").unwrap();
    assert_eq!(
        strata(&["convenient", "--order-file", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        strata(&["convenient", "--order-file", "/no/such/file.json"])
            .status
            .code(),
        Some(4)
    );
}

#[test]
fn measures_outputs() {
    let out = strata(&["measures", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["v_n"], "32/3");
    assert!((v["d_n_eff"].as_f64().unwrap() - 0.75).abs() < 1e-9);

    let grid = strata(&["measures", "--n", "1", "--grid", "5"]);
    assert_eq!(grid.status.code(), Some(0));
    let text = String::from_utf8(grid.stdout).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(text.starts_with("theta_1,mu,nu_effective,nu_closed_form\n"));

    assert_eq!(strata(&["measures", "--n", "7"]).status.code(), Some(2));
}

#[test]
fn find_heavy_golden() {
    let out = strata(&["find-heavy", "--m", "2", "--d0", "-7", "--limit", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["p"], "29");
    assert_eq!(v["F"], "4");
    assert_eq!(v["ratio"], "1/2");
    assert_eq!(
        strata(&["find-heavy", "--m", "2", "--d0", "-12"]).status.code(),
        Some(2)
    );
}

#[test]
fn examples_sweep() {
    let out = strata(&["examples", "--family", "smaller", "--pmax", "1000"]);
    assert_eq!(out.status.code(), Some(0));
    let members = json(&out);
    let members = members.as_array().unwrap();
    // primes p = 7 mod 8 below 1000
    let expected = (7..1000u64)
        .step_by(8)
        .filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0))
        .count();
    assert_eq!(members.len(), expected);
    assert!(members.iter().all(|m| m["bound"] == "holds"));
    assert_eq!(
        strata(&["examples", "--family", "tiny", "--pmax", "100"]).status.code(),
        Some(2)
    );
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let a = strata(&["--threads", "1", "ec-census", "--p", "1009"]);
    let b = Command::new(env!("CARGO_BIN_EXE_strata"))
        .env("PPAV_THREADS", "3")
        .args(["ec-census", "--p", "1009"])
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = strata(&["examples", "--family", "small", "--pmax", "300"]);
    let d = strata(&["--threads", "2", "examples", "--family", "small", "--pmax", "300"]);
    assert_eq!(c.stdout, d.stdout);
}

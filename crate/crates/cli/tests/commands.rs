use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn cogrowth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cogrowth"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cogrowth-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn constant_terms_of_tree_of_squares() {
    let out = cogrowth(&["series", "--group", "G(2,2)", "--order", "6", "--q0"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1,0,4,0,36,0,400");
}

#[test]
fn trefoil_growth_rate_to_eight_digits() {
    let out = cogrowth(&["cogrowth", "--group", "B3-trefoil", "--digits", "8"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "3.95063099");
}

#[test]
fn oracle_table_matches_series_table() {
    let (a, b) = (scratch("oracle.csv"), scratch("series.csv"));
    let out = cogrowth(&[
        "oracle",
        "--group",
        "G(3,4)",
        "--max-len",
        "4",
        "--out",
        a.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = cogrowth(&[
        "series",
        "--group",
        "G(3,4)",
        "--order",
        "4",
        "--out",
        b.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let oracle = std::fs::read_to_string(a).unwrap();
    assert!(oracle.starts_with("n,m,count\n0,0,1\n"));
    assert_eq!(oracle, std::fs::read_to_string(b).unwrap());
}

#[test]
fn oracle_json_schema() {
    let out = cogrowth(&["oracle", "--group", "G(2,3)", "--max-len", "5", "--facet", "1"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["group"], "G(2,3)");
    let counts = v["counts"].as_array().unwrap();
    assert_eq!(counts[0]["n"], 0);
    assert_eq!(counts[0]["m"], 0);
    assert_eq!(counts[0]["f"], "1");
    assert!(counts.iter().all(|c| c["f"].is_string()));
}

#[test]
fn series_json_schema_and_determinism() {
    let run = || {
        stdout(&cogrowth(&[
            "series",
            "--group",
            "G(2,3)",
            "--order",
            "30",
            "--unknown",
            "L0:2",
        ]))
    };
    let first = run();
    assert_eq!(first, run());
    let v: Value = serde_json::from_str(&first).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 31);
    assert_eq!(rows[0]["n"], 0);
    assert_eq!(rows[0]["q"][0], serde_json::json!([0, "1"]));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["verify", "--suite", "everything"][..],
        &["series", "--group", "G(1,3)", "--order", "4"],
        &["series", "--group", "G(2,3)", "--order", "4", "--unknown", "L0:3"],
        &["series", "--group", "G(2,3)", "--order", "4", "--q0", "--q-track"],
        &["cogrowth", "--group", "G(2,3)", "--digits", "40"],
        &["series", "--order", "4"],
    ] {
        let out = cogrowth(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn computation_errors_exit_with_one() {
    let out = Command::new(env!("CARGO_BIN_EXE_cogrowth"))
        .args(["oracle", "--group", "G(3,4)", "--max-len", "10"])
        .env("COGROWTH_ORACLE_STATE_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("COGROWTH_ORACLE_STATE_CAP"));

    let input = scratch("noise.json");
    let noise: Vec<String> = (0..200u64).map(|i| ((i * 7919 + 13) % 1009).to_string()).collect();
    std::fs::write(&input, serde_json::to_string(&noise).unwrap()).unwrap();
    let out = cogrowth(&[
        "guess",
        "--in",
        input.to_str().unwrap(),
        "--max-order",
        "2",
        "--max-degree",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn guess_from_series_dump() {
    let dump = scratch("g22.json");
    let rec = scratch("g22-rec.json");
    let out = cogrowth(&[
        "series",
        "--group",
        "G(2,2)",
        "--order",
        "240",
        "--q0",
        "--out",
        dump.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = cogrowth(&[
        "guess",
        "--in",
        dump.to_str().unwrap(),
        "--max-order",
        "2",
        "--max-degree",
        "3",
        "--stride",
        "2",
        "--out",
        rec.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // (n+1)² a_{n+1} = 4(2n+1)² a_n for a_n = binom(2n,n)²
    let v: Value = serde_json::from_str(&std::fs::read_to_string(rec).unwrap()).unwrap();
    assert_eq!(v["order"], 1);
    assert_eq!(v["degree"], 2);
    let mut coeffs: Vec<(u64, u64, String)> = v["coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            (
                c[0].as_u64().unwrap(),
                c[1].as_u64().unwrap(),
                c[2].as_str().unwrap().to_string(),
            )
        })
        .collect();
    coeffs.sort();
    let sign = if coeffs[0].2.starts_with('-') { -1 } else { 1 };
    let values: Vec<i64> = coeffs.iter().map(|c| sign * c.2.parse::<i64>().unwrap()).collect();
    assert_eq!(values, [4, 16, 16, -1, -2, -1]);
}

#[test]
fn guess_from_plain_array() {
    let input = scratch("catalan.json");
    let mut c = vec![1u128];
    for n in 0..56u128 {
        c.push(c[n as usize] * 2 * (2 * n + 1) / (n + 2));
    }
    let values: Vec<String> = c.iter().map(u128::to_string).collect();
    std::fs::write(&input, serde_json::to_string(&values).unwrap()).unwrap();
    let out = cogrowth(&[
        "guess",
        "--in",
        input.to_str().unwrap(),
        "--max-order",
        "1",
        "--max-degree",
        "1",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!((v["order"].as_u64(), v["degree"].as_u64()), (Some(1), Some(1)));
}

#[test]
fn asymptotics_report_fields() {
    let path = scratch("g22-report.json");
    let out = cogrowth(&[
        "asymptotics",
        "--group",
        "G(2,2)",
        "--order",
        "220",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    for key in [
        "mu",
        "lambda",
        "sigma2",
        "alpha",
        "amplitude",
        "vn_max",
        "variance_slope",
    ] {
        assert!(v[key].is_number(), "{key}");
    }
    assert!((v["mu"].as_f64().unwrap() - 4.0).abs() < 1e-10);
    assert!((v["sigma2"].as_f64().unwrap() - 0.25).abs() < 1e-6);
    assert!((v["alpha"].as_f64().unwrap() + 1.0).abs() < 0.1);
    assert!(v["minimal_poly_residuals"]["growth"].as_f64().unwrap().abs() < 1e-9);
}

#[test]
fn fast_suite_passes() {
    let out = cogrowth(&["verify", "--suite", "fast"]);
    assert!(out.status.success(), "{}", stdout(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 12);
    assert!(text
        .lines()
        .all(|l| l.starts_with("PASS [1]") || l.starts_with("PASS [2]")));
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use polycount::counts::monic_total_series;
use polycount::ZSeries;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polycount"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    let out = run(args);
    if out.status.code() != Some(0) {
        assert!(out.stdout.is_empty(), "{args:?} printed on failure");
    }
    out.status.code().unwrap()
}

#[test]
fn irr_small_and_univariate() {
    assert_eq!(ok(&["irr", "--vars", "2", "--deg", "1"]), "q^2 + q\n");
    assert_eq!(
        ok(&["irr", "--vars", "1", "--deg", "3", "--q", "2"]),
        "1/3*q^3 - 1/3*q\n2\n"
    );
    assert_eq!(
        ok(&["irr", "--vars", "2", "--deg", "1", "--format", "latex"]),
        "q^{2} + q\n"
    );
}

#[test]
fn irr_degree_100_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("log.json");
    let cache = cache.to_str().unwrap();

    let json: Value = serde_json::from_str(&ok(&[
        "irr", "--vars", "2", "--deg", "100", "--format", "json",
    ]))
    .unwrap();
    assert_eq!(json["terms"].as_array().unwrap().len(), 4385);
    assert_eq!(json["den_pow_qminus1"], 1);

    let args = [
        "irr", "--vars", "2", "--deg", "100", "--q", "2", "--cache", cache,
    ];
    let first = ok(&args);
    assert!(Path::new(cache).exists());
    let second = ok(&args);
    assert_eq!(first, second);
    let value = first.lines().nth(1).unwrap();
    assert_eq!(value.len(), 1551);
    assert!(value.starts_with("4031880625288"));
    assert!(value.ends_with("8282220076800"));

    // smaller degrees are served from the same entry
    let lower = ok(&["irr", "--vars", "2", "--deg", "7", "--cache", cache]);
    assert_eq!(lower, ok(&["irr", "--vars", "2", "--deg", "7"]));
}

#[test]
fn irr_multi() {
    let a = ok(&["irr-multi", "--deg", "11,5", "--q", "2"]);
    assert_eq!(a.lines().nth(1), Some("4499945769704095481856"));
    assert!(a.starts_with("(1/(q-1))(q^72 - q^67 - q^66 - q^60"));
    assert_eq!(a, ok(&["irr-multi", "--deg", "5,11", "--q", "2"]));
    assert_eq!(ok(&["irr-multi", "--deg", "1,0"]), "q\n");
    assert_eq!(code(&["irr-multi", "--deg", "3"]), 1);
    assert_eq!(code(&["irr-multi", "--deg", "0,0"]), 1);
}

#[test]
fn indec() {
    let j = ok(&["indec", "--vars", "2", "--deg", "100"]);
    assert!(j.starts_with("q^5151 - q^5050 - q^1327 + q^1276 - q^354 "));
    assert_eq!(ok(&["indec", "--vars", "2", "--deg", "1"]), "q^3 - q\n");
    assert_eq!(
        ok(&["indec", "--vars", "2", "--deg", "2", "--q", "2"]),
        "q^6 - q^4 - q^3 + q^2\n44\n"
    );
    assert_eq!(code(&["indec", "--vars", "1", "--deg", "2"]), 1);
}

#[test]
fn approx() {
    assert_eq!(
        ok(&["approx", "irr", "--vars", "2", "--deg", "100"]),
        "main: (1/(q-1))(q^5151 - q^5052 - q^5051 - q^5050)\nerror_exponent: 4954\n"
    );
    assert_eq!(
        ok(&["approx", "irr-multi", "--deg", "11,5"]),
        "main: (1/(q-1))(q^72 - q^67 - q^66)\nerror_exponent: 61\n"
    );
    let v: Value = serde_json::from_str(&ok(&[
        "approx", "indec", "--vars", "2", "--deg", "100", "--format", "json",
    ]))
    .unwrap();
    assert_eq!(v["error_exponent"], 355);
    assert_eq!(v["main"]["terms"].as_array().unwrap().len(), 4);
    assert_eq!(code(&["approx", "indec", "--vars", "2", "--deg", "6"]), 1);
    assert_eq!(code(&["approx", "irr", "--vars", "2", "--deg", "2"]), 1);
}

#[test]
fn series_output_satisfies_the_log_identity() {
    let out = ok(&["series", "--vars", "2", "--terms", "3", "--format", "json"]);
    let l: ZSeries = serde_json::from_str(&out).unwrap();
    assert_eq!(l.trunc(), 3);
    let n = monic_total_series(2, 3).unwrap();
    assert!(n
        .log_derivative_defect(&l)
        .unwrap()
        .iter()
        .all(|d| d.is_zero()));
    let text = ok(&["series", "--vars", "2", "--terms", "3"]);
    assert_eq!(text.lines().count(), 3);
    assert!(text.starts_with("[z^1] q^2 + q\n"));
    assert_eq!(code(&["series", "--vars", "1", "--terms", "5"]), 1);
}

#[test]
fn series_cache_is_transparent_and_recovers() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    let c = cache.to_str().unwrap();
    let plain = ok(&["series", "--vars", "3", "--terms", "12"]);
    assert_eq!(
        ok(&["series", "--vars", "3", "--terms", "12", "--cache", c]),
        plain
    );
    assert_eq!(
        ok(&["series", "--vars", "3", "--terms", "12", "--cache", c]),
        plain
    );
    let stored: Value = serde_json::from_str(&fs::read_to_string(&cache).unwrap()).unwrap();
    assert_eq!(stored["version"], "v1");

    fs::write(&cache, "{not json").unwrap();
    let out = run(&["series", "--vars", "3", "--terms", "12", "--cache", c]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), plain);
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));

    fs::write(&cache, r#"{"version":"v0","entries":[]}"#).unwrap();
    assert_eq!(
        ok(&["series", "--vars", "3", "--terms", "12", "--cache", c]),
        plain
    );

    // an entry whose contents do not match its key is discarded
    let mut bad = stored.clone();
    bad["entries"][0]["nu"] = Value::from(2);
    fs::write(&cache, bad.to_string()).unwrap();
    let out = run(&["series", "--vars", "2", "--terms", "12", "--cache", c]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        ok(&["series", "--vars", "2", "--terms", "12"])
    );
}

#[test]
fn verify() {
    let out = ok(&["verify", "--p", "2", "--max-deg", "4", "--mode", "irr"]);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.ends_with("\tPASS")));
    let out = ok(&["verify", "--p", "3", "--max-deg", "3", "--mode", "indec"]);
    assert!(out.lines().skip(1).all(|r| r.ends_with("\tPASS")));
    let v: Value = serde_json::from_str(&ok(&[
        "verify",
        "--p",
        "2",
        "--max-deg",
        "2",
        "--mode",
        "multi",
        "--format",
        "json",
    ]))
    .unwrap();
    assert!(v.as_array().unwrap().iter().all(|r| r["pass"] == true));
    let out = ok(&[
        "verify",
        "--p",
        "3",
        "--vars",
        "1",
        "--max-deg",
        "8",
        "--mode",
        "uni",
    ]);
    assert_eq!(out.lines().count(), 9);
    assert_eq!(
        code(&["verify", "--p", "7", "--max-deg", "2", "--mode", "irr"]),
        1
    );
    assert_eq!(
        code(&["verify", "--p", "5", "--max-deg", "4", "--mode", "irr"]),
        1
    );
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(code(&[]), 1);
    assert_eq!(code(&["bogus"]), 1);
    assert_eq!(code(&["irr", "--vars", "2"]), 1);
    assert_eq!(code(&["irr", "--vars", "2", "--deg", "0"]), 1);
    assert_eq!(code(&["irr", "--vars", "2", "--deg", "3", "--q", "1"]), 1);
    assert_eq!(
        code(&["irr", "--vars", "2", "--deg", "3", "--format", "xml"]),
        1
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn output_is_deterministic() {
    let args = [
        "irr-multi",
        "--deg",
        "4,3,2",
        "--format",
        "json",
        "--q",
        "3",
    ];
    assert_eq!(ok(&args), ok(&args));
}

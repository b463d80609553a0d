//! End-to-end tests against the compiled binary: exit codes, stream formats,
//! determinism, and the prime-cache round trip.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn psum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psum"))
        .args(args)
        .env_remove("PSUM_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn psum_cached(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psum"))
        .args(args)
        .env("PSUM_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn stdout_lines(out: &Output) -> Vec<String> {
    String::from_utf8(out.stdout.clone())
        .expect("stdout is utf-8")
        .lines()
        .map(str::to_owned)
        .collect()
}

fn parse_json(line: &str) -> Value {
    serde_json::from_str(line).unwrap_or_else(|e| panic!("bad json line {line:?}: {e}"))
}

#[test]
fn thm2_range_emits_exact_json_records() {
    let out = psum(&["thm2", "--range", "1:200"]);
    assert!(out.status.success(), "exit: {:?}", out.status);
    let lines = stdout_lines(&out);
    assert_eq!(lines.len(), 200);
    for line in &lines {
        let v = parse_json(line);
        assert_eq!(v["identity"], "thm2");
        assert_eq!(v["exact"], true);
        assert_eq!(v["residual"], 0);
    }
    let at_20 = parse_json(&lines[19]);
    assert_eq!(at_20["x"], 20);
    assert_eq!(at_20["lhs"], 10);
    assert_eq!(at_20["rhs"], 10);
}

#[test]
fn seeded_sampling_is_byte_identical_across_runs() {
    let args = [
        "thm2", "--sample", "25", "--min", "100", "--max", "100000", "--seed", "42",
    ];
    let first = psum(&args);
    let second = psum(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout, "same config must replay the same bytes");
    assert_eq!(stdout_lines(&first).len(), 25);
}

#[test]
fn out_of_domain_range_is_a_usage_error() {
    let out = psum(&["thm1", "--range", "1:4"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("thm1 requires x >= 5"), "stderr: {err}");
    assert!(out.stdout.is_empty(), "usage errors must not emit records");
}

#[test]
fn collision_single_modulus_reports_lex_first_pair() {
    let out = psum(&["collision", "--n", "20"]);
    assert!(out.status.success());
    let lines = stdout_lines(&out);
    assert_eq!(lines.len(), 2, "one record plus the tally footer");
    let rec = parse_json(&lines[0]);
    assert_eq!(rec["kind"], "collision");
    assert_eq!(rec["n"], 20);
    assert_eq!(rec["status"], "pass");
    assert_eq!(rec["witnesses"], serde_json::json!([[3, 5], [5, 7]]));
    let tally = parse_json(&lines[1]);
    assert_eq!(tally["summary"]["checked"], 1);
    assert_eq!(tally["summary"]["pass"], 1);
    assert_eq!(tally["summary"]["violation"], 0);
}

#[test]
fn goldbach_single_even_emits_coprime_witness() {
    let out = psum(&["goldbach", "--range", "10:10"]);
    assert!(out.status.success());
    let lines = stdout_lines(&out);
    let rec = parse_json(&lines[0]);
    assert_eq!(rec["status"], "pass");
    assert_eq!(rec["witnesses"], serde_json::json!([[3, 3, 7]]));
}

#[test]
fn goldbach_rejects_odd_alignment() {
    let out = psum(&["goldbach", "--range", "7:7"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("no even argument"), "stderr: {err}");
}

#[test]
fn window_scan_violations_drive_exit_code() {
    let out = psum(&["prime-window", "--range", "3:40"]);
    assert_eq!(out.status.code(), Some(1), "violations must exit 1");
    let lines = stdout_lines(&out);
    let tally = parse_json(lines.last().expect("tally footer"));
    assert_eq!(tally["summary"]["checked"], 38);
    assert_eq!(tally["summary"]["violation"], 2);
    assert_eq!(tally["summary"]["inconclusive"], 0);
    for line in &lines[..lines.len() - 1] {
        let rec = parse_json(line);
        assert_eq!(rec["kind"], "prime-window");
        let w = rec["witnesses"].as_array().expect("witness array");
        assert_eq!(w.len(), 1, "every n yields exactly one prime witness");
    }
}

#[test]
fn csv_headers_are_stable() {
    let cases: [(&[&str], &str); 3] = [
        (
            &["thm2", "--range", "5:5", "--format", "csv"],
            "identity,x,lhs,rhs,residual,exact",
        ),
        (
            &["collision", "--n", "20", "--format", "csv"],
            "kind,n,lower,upper,target,witnesses,status",
        ),
        (
            &["upsilon", "--range", "10:10", "--format", "csv"],
            "x,sum_direct,sum_lemma,sum_logsemiprime,mertens_sum,ratio",
        ),
    ];
    for (args, header) in cases {
        let out = psum(args);
        assert!(out.status.success(), "args {args:?}: {:?}", out.status);
        let lines = stdout_lines(&out);
        assert_eq!(lines[0], header, "args {args:?}");
    }
}

#[test]
fn trend_csv_lists_checkpoints_with_ratio() {
    let out = psum(&["trend", "--xs", "100,1000", "--format", "csv"]);
    assert!(out.status.success());
    let lines = stdout_lines(&out);
    assert_eq!(lines[0], "x,mertens_sum,logx_loglogx,ratio");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("100,"));
    assert!(lines[2].starts_with("1000,"));
}

#[test]
fn out_flag_routes_records_to_file() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("report.jsonl");
    let out = psum(&["thm2", "--range", "1:50", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty(), "--out must silence stdout");
    let body = std::fs::read_to_string(&path).expect("report written");
    assert_eq!(body.lines().count(), 50);
    parse_json(body.lines().next().unwrap());
}

#[test]
fn timings_are_json_only() {
    let out = psum(&["upsilon", "--range", "20:20", "--format", "csv", "--timings"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("--timings requires --format json"), "stderr: {err}");
}

#[test]
fn undersized_sieve_limit_is_raised_with_a_warning() {
    let out = psum(&["upsilon", "--range", "100:100", "--sieve-limit", "10"]);
    assert!(out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("below the required"), "stderr: {err}");
    let rec = parse_json(&stdout_lines(&out)[0]);
    assert_eq!(rec["x"], 100);
}

#[test]
fn missing_input_selection_is_a_usage_error() {
    let out = psum(&["thm2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("--range") || err.contains("--sample"), "stderr: {err}");
}

#[test]
fn prime_cache_round_trip_preserves_output() {
    let dir = tempfile::tempdir().expect("tempdir");
    let args = ["goldbach", "--range", "6:5000"];
    let cold = psum_cached(&args, dir.path());
    assert!(cold.status.success(), "cold run: {:?}", cold.status);
    let cached: Vec<_> = std::fs::read_dir(dir.path())
        .expect("cache dir readable")
        .map(|e| e.expect("entry").file_name().into_string().expect("utf-8 name"))
        .collect();
    assert!(
        cached.iter().any(|n| n.starts_with("psum1-") && n.ends_with(".primes")),
        "cache files: {cached:?}"
    );
    let warm = psum_cached(&args, dir.path());
    assert!(warm.status.success(), "warm run: {:?}", warm.status);
    assert_eq!(cold.stdout, warm.stdout, "cache must not change results");
}

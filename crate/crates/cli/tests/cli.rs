use std::process::{Command, Output};

use clap::Parser;
use gfd_cli::{Cli, RunConfig};
use serde_json::Value;

fn gfd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gfd")).args(args).env_remove("GFD_THREADS").output().expect("spawn gfd")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let o = gfd(&full);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    serde_json::from_slice(&o.stdout).unwrap()
}

/// CSV rows as (label, dimension, count, purity, cumulative).
fn csv_rows(args: &[&str]) -> Vec<(String, u128, u128, f64, f64)> {
    let o = gfd(args);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("label,dimension,count,purity,cumulative\n"));
    csv::Reader::from_reader(text.as_bytes())
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].to_string(), r[1].parse().unwrap(), r[2].parse().unwrap(), r[3].parse().unwrap(), r[4].parse().unwrap())
        })
        .collect()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn ghz_thirty_qubits_by_weight() {
    let rows = csv_rows(&["profile", "--qrt", "multipartite", "--family", "ghz", "--n", "30", "--format", "csv"]);
    assert_eq!(rows.len(), 31);
    let last = rows.last().unwrap();
    assert_eq!(last.0, "w=30");
    assert!((last.4 - 1.0).abs() < 1e-12);
    for w in rows.windows(2) {
        assert!(w[0].1 <= w[1].1, "rows not in dimension order");
    }
    // Only even weights (and the full weight) carry purity.
    for (label, _, _, p, _) in &rows {
        let k: u32 = label.trim_start_matches("w=").parse().unwrap();
        if k % 2 == 1 {
            assert!(p.abs() < 1e-15, "{label}: {p}");
        }
    }
}

#[test]
fn bell_top_class() {
    let rows = csv_rows(&["profile", "--qrt", "bipartite2q", "--family", "bell"]);
    let top = rows.iter().find(|r| r.0 == "(1,1)").unwrap();
    assert!((top.3 - 0.75).abs() < 1e-12);
    assert_eq!(top.1, 9);
}

#[test]
fn extent_at_pi_zig_zags() {
    let base = ["profile", "--qrt", "fermionic", "--family", "extent", "--gamma", "3.14159", "--n", "8"];
    let closed = csv_rows(&[&base[..], &["--method", "closed"]].concat());
    let brute = csv_rows(&[&base[..], &["--method", "brute"]].concat());
    assert_eq!(closed.len(), 17);
    for (c, b) in closed.iter().zip(&brute) {
        assert_eq!(c.0, b.0);
        assert!((c.3 - b.3).abs() < 1e-9, "{}: {} vs {}", c.0, c.3, b.3);
        let alpha: u32 = c.0.trim_start_matches("a=").parse().unwrap();
        if alpha % 4 == 2 || alpha % 2 == 1 {
            assert!(c.3 < 1e-9, "{}: {}", c.0, c.3);
        }
    }
    let a4 = closed.iter().find(|r| r.0 == "a=4").unwrap().3;
    assert!(a4 > 0.1);
}

#[test]
fn verify_exit_codes() {
    assert_eq!(code(&gfd(&["verify", "--qrt", "spin", "--s", "4"])), 0);
    assert_eq!(code(&gfd(&["verify", "--qrt", "clifford", "--n", "2"])), 0);
    assert_eq!(code(&gfd(&["verify", "--qrt", "multipartite", "--n", "4"])), 0);
    assert_eq!(code(&gfd(&["verify", "--qrt", "fermionic", "--n", "8"])), 0);
    assert_eq!(code(&gfd(&["verify", "--qrt", "bipartite2q"])), 0);
    assert_eq!(code(&gfd(&["verify", "--qrt", "fermionic", "--n", "5"])), 2);
    assert_eq!(code(&gfd(&["verify", "--qrt", "fermionic", "--n", "6", "--family", "extent"])), 2);
    assert_eq!(code(&gfd(&["verify", "--qrt", "fermionic", "--n", "6", "--family", "ghz"])), 0);
}

#[test]
fn verify_reports_offenders_beyond_tolerance() {
    let o = gfd(&["verify", "--qrt", "spin", "--s", "4", "--tolerance", "0"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("in family spin_"), "{}", stderr(&o));
}

#[test]
fn verify_json_lists_families() {
    let v = json(&["verify", "--qrt", "clifford", "--n", "2"]);
    assert_eq!(v["passed"], Value::Bool(true));
    let names: Vec<&str> = v["families"].as_array().unwrap().iter().map(|f| f["family"].as_str().unwrap()).collect();
    assert_eq!(names, ["stabilizer_canonical", "magic", "constants"]);
    for fam in v["families"].as_array().unwrap() {
        assert!(f(&fam["max_deviation"]) < 1e-9);
    }
}

#[test]
fn haar_bipartite_anchor() {
    let v = json(&["haar", "--qrt", "bipartite2q", "--samples", "10000", "--seed", "7"]);
    let row = v["rows"].as_array().unwrap().iter().find(|r| r["label"] == "(1,1)").unwrap();
    assert!((f(&row["analytic"]) - 0.45).abs() < 1e-15);
    assert!(f(&row["sigma_distance"]) < 3.0);
}

#[test]
fn haar_multipartite_within_four_sigma() {
    let v = json(&["haar", "--qrt", "multipartite", "--n", "3", "--samples", "10000", "--aggregation", "per-irrep"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    for r in rows {
        assert!(f(&r["sigma_distance"]) < 4.0, "{r}");
    }
}

#[test]
fn haar_fermionic_within_budget() {
    let v = json(&["haar", "--qrt", "fermionic", "--n", "4", "--samples", "20000"]);
    let budget = f(&v["budget"]);
    assert_eq!(budget, 0.25);
    for r in v["rows"].as_array().unwrap() {
        let diff = (f(&r["mean"]) - f(&r["analytic"])).abs();
        assert!(diff <= 4.0 * f(&r["std_error"]) + budget + 1e-12, "{r}");
    }
}

#[test]
fn haar_clifford_witness_anchor() {
    let v = json(&["haar", "--qrt", "clifford", "--n", "2", "--samples", "10000"]);
    let w = v["rows"].as_array().unwrap().iter().find(|r| r["label"] == "W").unwrap();
    assert!((f(&w["analytic"]) - 1.0 / 7.0).abs() < 1e-15);
    assert!(f(&w["sigma_distance"]) < 3.0);
}

#[test]
fn maxent_examples() {
    let v = json(&["maxent", "--family", "product", "--n", "4", "--seed", "1"]);
    assert_eq!(v["certified"], Value::Bool(true));
    assert!(f(&v["fidelity"]) >= 1.0 - 1e-9);

    let v = json(&["maxent", "--family", "ghz", "--n", "4"]);
    assert_eq!(v["certified"], Value::Bool(false));

    let v = json(&["maxent", "--family", "gaussian_random", "--n", "4", "--seed", "2"]);
    assert_eq!(v["qrt"]["kind"], "fermionic");
    let sv = v["singular_values"].as_array().unwrap();
    assert_eq!(sv.len(), 8);
    assert!(sv.iter().all(|s| (f(s) - 1.0).abs() < 1e-9));
}

#[test]
fn capacity_errors_exit_three_and_name_the_cap() {
    let o = gfd(&["profile", "--qrt", "multipartite", "--family", "ghz", "--n", "30", "--method", "brute"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("capped at 24"), "{}", stderr(&o));

    let o = gfd(&["profile", "--qrt", "fermionic", "--family", "haar_even_parity", "--n", "20"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("capped at 10"), "{}", stderr(&o));

    let o = gfd(&["haar", "--qrt", "clifford", "--n", "5", "--samples", "10"]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&gfd(&["profile", "--qrt", "multipartite", "--family", "nope", "--n", "3"])), 2);
    assert_eq!(code(&gfd(&["profile", "--qrt", "multipartite", "--family", "ghz"])), 2);
    assert_eq!(code(&gfd(&["profile", "--qrt", "spin", "--s", "0.3", "--family", "ghz"])), 2);
    assert_eq!(code(&gfd(&["profile", "--qrt", "spin", "--s", "1", "--family", "w"])), 2);
    assert_eq!(code(&gfd(&["frobnicate"])), 2);
    assert_eq!(code(&gfd(&["--help"])), 0);
}

#[test]
fn csv_and_json_carry_identical_values() {
    let args = ["profile", "--qrt", "fermionic", "--family", "gaussian_random", "--n", "4", "--seed", "11"];
    let rows = csv_rows(&args);
    let v = json(&args);
    let jrows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), jrows.len());
    for (c, j) in rows.iter().zip(jrows) {
        assert_eq!(c.0, j["label"].as_str().unwrap());
        assert_eq!(c.3.to_bits(), f(&j["purity"]).to_bits());
        assert_eq!(c.4.to_bits(), f(&j["cumulative"]).to_bits());
    }
    assert_eq!(v["method"], "brute");
    assert_eq!(v["state"]["seed"], 11);
}

#[test]
fn seed_determines_random_output() {
    let run = |seed: &str| gfd(&["haar", "--qrt", "multipartite", "--n", "2", "--samples", "200", "--seed", seed]).stdout;
    assert_eq!(run("5"), run("5"));
    assert_ne!(run("5"), run("6"));
    let threads = |t: &str| {
        gfd(&["haar", "--qrt", "fermionic", "--n", "3", "--samples", "300", "--seed", "5", "--threads", t]).stdout
    };
    assert_eq!(threads("1"), threads("4"));
}

#[test]
fn output_file_is_written_whole() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bell.json");
    let args = ["profile", "--qrt", "bipartite2q", "--family", "bell", "--format", "json"];
    let o = gfd(&[&args[..], &["--output", path.to_str().unwrap()]].concat());
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), gfd(&args).stdout);
    let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(entries.len(), 1, "temp file left behind");
}

#[test]
fn list_irreps_checksums() {
    let v = json(&["list-irreps", "--qrt", "multipartite", "--n", "40"]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 41);
    // 4^40 exceeds u64; the emitted integer must still be exact.
    let raw = stdout(&gfd(&["list-irreps", "--qrt", "multipartite", "--n", "40", "--format", "json"]));
    assert!(raw.contains(&format!("\"checksum\": {}", 1u128 << 80)), "{raw}");

    let v = json(&["list-irreps", "--qrt", "clifford", "--n", "2"]);
    assert_eq!(v["checksum"], 256);
    let v = json(&["list-irreps", "--qrt", "spin", "--s", "2.5"]);
    assert_eq!(v["checksum"], 36);
}

#[test]
fn run_config_round_trips_through_json() {
    let lines: [&[&str]; 6] = [
        &["gfd", "profile", "--qrt", "fermionic", "--family", "extent", "--gamma", "0.7", "--n", "8", "--format", "json"],
        &["gfd", "--seed", "3", "profile", "--qrt", "spin", "--s", "1.5", "--family", "basis", "--m", "-0.5"],
        &["gfd", "verify", "--qrt", "clifford", "--n", "2", "--tolerance", "1e-7", "--family", "magic"],
        &["gfd", "haar", "--qrt", "multipartite", "--n", "3", "--samples", "77", "--threads", "2"],
        &["gfd", "maxent", "--family", "gaussian_random", "--n", "4", "--seed", "2", "--output", "/tmp/r.json"],
        &["gfd", "list-irreps", "--qrt", "bipartite2q", "--aggregation", "by-hamming-weight", "--method", "closed"],
    ];
    for line in lines {
        let cfg = RunConfig::from_cli(Cli::try_parse_from(line).unwrap()).unwrap();
        let text = serde_json::to_string(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg, "{text}");
    }
}

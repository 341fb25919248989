use std::process::{Command, Output};

use chordstat::exact::count_row;
use chordstat::StatKind;
use num_bigint::BigInt;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chordstat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).unwrap()
}

#[test]
fn count_row_example() {
    let out = run(&["count", "--stat", "K", "--n", "6"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines, ["p0,p1,p2,p3,p4,p5", "13140,16470,16560,11160,4320,720"]);
}

#[test]
fn single_count() {
    let out = run(&["count", "--stat", "contained", "--n", "5", "--p", "4"]);
    assert_eq!(stdout(&out), "stat,n,p,count\nC,5,4,105\n");
}

#[test]
fn table_round_trips_up_to_20() {
    for stat in StatKind::ALL {
        let out = run(&["table", "--stat", &stat.to_string(), "--n-max", "20"]);
        assert!(out.status.success());
        let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
        assert_eq!(reader.headers().unwrap().len(), 21);
        for (i, rec) in reader.records().enumerate() {
            let rec = rec.unwrap();
            let n: usize = rec[0].parse().unwrap();
            assert_eq!(n, i + 1);
            let parsed: Vec<BigInt> = rec.iter().skip(1).take(n).map(|c| c.parse().unwrap()).collect();
            assert!(rec.iter().skip(1 + n).all(str::is_empty));
            assert_eq!(parsed, count_row(stat, n).unwrap().counts(), "{stat} n={n}");
        }
    }
}

#[test]
fn moments_mean_example() {
    let v = json(&["moments", "--stat", "X", "--n", "100", "--m", "1"]);
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["rows"][0]["mean"], "33");
    assert_eq!(v["rows"][0]["factorial_moment"], "33");
    assert_eq!(v["rows"][0]["variance"], "2266/5");
}

#[test]
fn oracle_small_agrees() {
    let v = json(&["oracle", "--n", "3"]);
    assert_eq!(v["summary"]["agreement"], true);
    assert_eq!(v["summary"]["visited"], 45);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 12);
    let g: Vec<_> = rows
        .iter()
        .filter(|r| r["stat"] == "G")
        .map(|r| r["oracle_count"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(g, ["32", "11", "2"]);
}

#[test]
fn exact_and_decimal_columns_are_separate() {
    let v = json(&["dist", "--stat", "C", "--n", "3"]);
    let row = &v["rows"][1];
    assert_eq!(row["probability"], "1/5");
    assert_eq!(row["probability_decimal"], 0.2);
}

#[test]
fn divergent_density_is_marked() {
    let out = run(&["asym", "--stat", "G", "--points", "3"]);
    assert_eq!(stdout(&out).lines().nth(1), Some("0.0,inf"));
}

#[test]
fn sample_is_deterministic() {
    let args = ["sample", "--n", "12", "--reps", "5000", "--seed", "99"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let strip = |mut v: Value| {
        v["metadata"]["timing"] = Value::Null;
        v
    };
    let ja = strip(json(&args));
    let jb = strip(json(&args));
    assert_eq!(ja, jb);
    assert_eq!(ja["metadata"]["seed"], 99);
    assert_eq!(ja["metadata"]["rng_algorithm"], "ChaCha8Rng/rand_chacha-0.3/seed_from_u64");

    let other = run(&["sample", "--n", "12", "--reps", "5000", "--seed", "100"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn streams_are_deterministic_too() {
    let args = ["sample", "--n", "10", "--reps", "4001", "--seed", "5", "--streams", "3"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn figure2_defaults_to_lattice() {
    let v = json(&["figure2", "--n", "11", "--stat", "K"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[5]["x"], 0.5);
    assert_eq!(rows[5]["asymptotic"], 0.0);
}

#[test]
fn recursion_agrees() {
    let v = json(&["recursion", "--n-max", "12"]);
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r["agrees"] == true));
}

#[test]
fn usage_errors_exit_1() {
    for args in [
        vec!["count", "--stat", "Q", "--n", "3"],
        vec!["count", "--n", "3"],
        vec!["table", "--stat", "K", "--n-max", "0"],
        vec!["moments", "--stat", "K", "--n", "3", "--m", "3"],
        vec!["oracle", "--n", "9"],
        vec!["normal", "--stat", "G", "--n", "10"],
        vec!["count", "--stat", "K", "--n", "3", "--p", "7"],
        vec!["frobnicate"],
        vec![],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn core_errors_carry_structured_diagnostics() {
    let out = run(&["oracle", "--n", "12"]);
    assert_eq!(out.status.code(), Some(1));
    let diag: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(diag["status"], "error");
    assert_eq!(diag["kind"], "resource_cap");
    assert_eq!(diag["command"], "oracle");
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["sample", "--help"]).status.code(), Some(0));
}

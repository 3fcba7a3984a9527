//! End-to-end checks of the binary: flag handling, exit codes, output
//! shapes, and byte-level determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn orderlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orderlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = orderlab(args);
    assert!(out.status.success(), "command failed: {:?}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn tmp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("orderlab-cli-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn help_prints_usage() {
    let out = orderlab(&["--help"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("USAGE"));
    assert!(text.contains("sampler-check"));
}

#[test]
fn config_errors_exit_with_code_two() {
    for bad in [
        vec!["frobnicate"],
        vec!["solve", "--n", "4"],                          // missing solver
        vec!["solve", "--solver", "split"],                 // missing n
        vec!["solve", "--solver", "split", "--n", "4", "--m", "3"], // m < n
        vec!["gametree", "--n", "12"],                      // 2^n > 64
        vec!["primes", "--n", "40"],
        vec!["primes", "--n", "4", "--window", "all"],
        vec!["sampler-check", "--n", "10"],                 // n not divisible by 3
    ] {
        let out = orderlab(&bad);
        assert_eq!(out.status.code(), Some(2), "args {bad:?}");
    }
}

#[test]
fn primes_reports_window_and_bound() {
    let text = stdout_of(&["primes", "--n", "5", "--window", "R"]);
    assert!(text.contains("window=R n=5 lo=16 hi=32"));
    assert!(text.contains("count=5"));
    let text = stdout_of(&["primes", "--n", "6", "--window", "Rprime"]);
    assert!(text.contains("count=3"));
    assert!(text.contains("bound=4/21"));
}

#[test]
fn gametree_small_cases() {
    assert!(stdout_of(&["gametree", "--n", "1", "--m", "2"]).contains("depth=1"));
    assert!(stdout_of(&["gametree", "--n", "4", "--m", "7"]).contains("depth=4"));
}

#[test]
fn solve_csv_schema() {
    let text = stdout_of(&[
        "solve", "--solver", "scan", "--n", "4", "--m", "8", "--trials", "3", "--seed", "2",
    ]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("trial,seed,n,m,r,y0,solver,reported,correct,queries"));
    for i in 0..3 {
        let row = lines.next().unwrap();
        assert!(row.starts_with(&format!("{i},")), "row {row}");
        assert_eq!(row.split(',').count(), 10);
        assert!(row.contains(",scan,"));
    }
    assert!(text.contains("# success_rate=1.000000"));
}

#[test]
fn solve_writes_csv_to_file() {
    let path = tmp_path("solve.csv");
    let text = stdout_of(&[
        "solve", "--solver", "split", "--n", "4", "--m", "7", "--trials", "4",
        "--out", path.to_str().unwrap(),
    ]);
    // rows go to the file; stdout keeps only the summary
    assert!(!text.contains("trial,seed"));
    assert!(text.starts_with('#'));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("trial,seed,"));
    assert_eq!(csv.lines().count(), 5);
    std::fs::remove_file(&path).ok();
}

#[test]
fn jobs_flag_does_not_change_output() {
    let base = stdout_of(&[
        "solve", "--solver", "split", "--n", "8", "--trials", "32", "--seed", "11",
    ]);
    let parallel = stdout_of(&[
        "solve", "--solver", "split", "--n", "8", "--trials", "32", "--seed", "11",
        "--jobs", "4",
    ]);
    assert_eq!(base, parallel);
}

#[test]
fn adversary_report_shape() {
    let text = stdout_of(&[
        "adversary", "--n", "12", "--m", "24", "--solver", "scan", "--seed", "4",
        "--max-queries", "5",
    ]);
    assert!(text.contains("adversary n=12 m=24 solver=scan"));
    assert!(text.contains("step 5: remaining="));
    assert!(text.contains("queries_answered=5"));
    assert!(text.contains("chain:"));
    assert!(text.contains("witness r="));
    assert!(text.contains("evasive=true"));
}

#[test]
fn adversary_exports_witnesses() {
    let path = tmp_path("adv");
    stdout_of(&[
        "adversary", "--n", "10", "--m", "20", "--solver", "split", "--seed", "6",
        "--max-queries", "4", "--out", path.to_str().unwrap(),
    ]);
    for tag in 1..=2 {
        let file = PathBuf::from(format!("{}.witness{tag}.txt", path.display()));
        let text = std::fs::read_to_string(&file).unwrap();
        let (perm, _) = orderlab::textio::import_permutation(&text).unwrap();
        assert_eq!(perm.n(), 10);
        std::fs::remove_file(&file).ok();
    }
}

#[test]
fn identical_invocations_are_byte_identical() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["primes", "--n", "12", "--window", "R"],
        vec!["gametree", "--n", "3", "--m", "6"],
        vec!["solve", "--solver", "birthday", "--n", "10", "--trials", "20", "--seed", "9"],
        vec!["adversary", "--n", "10", "--m", "20", "--solver", "split", "--seed", "1", "--max-queries", "6"],
        vec!["sampler-check", "--n", "6", "--t", "4", "--trials", "500", "--seed", "3"],
    ];
    for args in cases {
        let first = orderlab(&args);
        let second = orderlab(&args);
        assert!(first.status.success(), "{args:?}");
        assert_eq!(first.stdout, second.stdout, "stdout differs for {args:?}");
        assert_eq!(first.stderr, second.stderr);
    }
}

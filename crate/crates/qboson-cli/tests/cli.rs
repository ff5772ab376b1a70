//! End-to-end checks of the command-line contract: exit codes, report
//! determinism, config-file precedence, and the CSV datasets.

use std::fs;
use std::process::{Command, Output};

fn qboson() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qboson"))
}

fn run(args: &[&str]) -> Output {
    qboson().args(args).output().expect("binary runs")
}

#[test]
fn exit_code_contract() {
    // 0: all checks pass
    let out = run(&["structure"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    // 2: configuration error (q = 1 exactly hits the guarded classical point)
    let out = run(&["hopf-verify", "--q", "1.0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("configuration error"));
    // 1: a failed check (deformed moments cannot close; see the module docs)
    let out = run(&["coherent", "--q", "1.2", "--nmax", "4"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out1 = dir.path().join("a");
    let out2 = dir.path().join("b");
    for out in [&out1, &out2] {
        let s = run(&["dual-basis", "--seed", "11", "--out", out.to_str().unwrap()]);
        assert_eq!(s.status.code(), Some(0));
    }
    let a = fs::read(out1.join("dual-basis.json")).unwrap();
    let b = fs::read(out2.join("dual-basis.json")).unwrap();
    assert_eq!(
        a, b,
        "identical config + seed must give byte-identical reports"
    );
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    fs::write(&conf, "q = 1.4\ndim = 10\n").unwrap();
    let out_dir = dir.path().join("out");
    // the flag overrides the file's q; the file's dim stays
    let s = run(&[
        "bipartite",
        "--config",
        conf.to_str().unwrap(),
        "--q",
        "1.3",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(s.status.code(), Some(0));
    let json = fs::read_to_string(out_dir.join("bipartite.json")).unwrap();
    assert!(json.contains("\"q\": 1.3"), "flag must override the file");
    assert!(json.contains("\"dim\": 10"), "file value must apply");
    // bad config key is a configuration error
    fs::write(&conf, "bogus = 1\n").unwrap();
    let s = run(&["bipartite", "--config", conf.to_str().unwrap()]);
    assert_eq!(s.status.code(), Some(2));
}

#[test]
fn csv_datasets() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    // 9 moment rows for the default n range 0..8, RFC 4180 line endings
    let s = run(&[
        "coherent",
        "--q",
        "1.00000001",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(s.status.code(), Some(0));
    let csv = fs::read_to_string(out_dir.join("moments.csv")).unwrap();
    assert!(csv.ends_with("\r\n"));
    let rows: Vec<&str> = csv.trim_end().split("\r\n").collect();
    assert_eq!(rows.len(), 10, "header plus 9 rows");
    assert_eq!(rows[0], "n,I_n,box_factorial,ratio");

    // a single q gives one bipartite row; a scan gives one per step
    let s = run(&["bipartite", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(s.status.code(), Some(0));
    let csv = fs::read_to_string(out_dir.join("bipartite.csv")).unwrap();
    assert_eq!(csv.trim_end().split("\r\n").count(), 2);
    let s = run(&[
        "bipartite",
        "--q-min",
        "1.05",
        "--q-max",
        "1.4",
        "--q-steps",
        "4",
        "--dim",
        "10",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(
        s.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&s.stdout)
    );
    let csv = fs::read_to_string(out_dir.join("bipartite.csv")).unwrap();
    assert_eq!(csv.trim_end().split("\r\n").count(), 5);
}

#[test]
fn timings_flag_breaks_and_restores_reproducibility() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let s = run(&["structure", "--timings", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(s.status.code(), Some(0));
    let json = fs::read_to_string(out_dir.join("structure.json")).unwrap();
    assert!(json.contains("wall_ms"));
}

//! End-to-end tests driving the compiled binary.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dualize"))
}

/// Write a scratch file under a per-process temp directory.
fn scratch(name: &str, content: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dualize-cli-tests-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, content).unwrap();
    path
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

/// The self-dual four-clause example.
const FOUR: &str = "1 2\n1 3\n1 4\n2 3 4\n";
/// The same CNF with one clause missing, so the pair is not dual.
const FOUR_MISSING: &str = "1 2\n1 3\n1 4\n";
/// An alpha-acyclic CNF whose GYO elimination ordering is frozen.
const ACYCLIC: &str = "1 2 3\n1 3 5\n1 5 6\n3 4 5\n";

#[test]
fn dualize_streams_the_dual_in_candidate_order() {
    let f = scratch("four.hg", FOUR);
    let out = bin()
        .args(["dualize", f.to_str().unwrap(), "--ordering", "given:1,2,3,4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    assert_eq!(stdout_of(&out), "2 3 4\n1 4\n1 3\n1 2\n");
}

#[test]
fn dualize_maps_terms_back_after_compaction() {
    let f = scratch("gaps.hg", "p mhg 6 2\n1 3\n5\n");
    let out = bin().args(["dualize", f.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let text = stdout_of(&out);
    let mut lines: Vec<&str> = text.lines().collect();
    lines.sort_unstable();
    assert_eq!(lines, vec!["1 5", "3 5"]);
}

#[test]
fn dualize_prints_one_empty_term_for_the_constant_one_cnf() {
    let f = scratch("one.hg", "p mhg 3 0\n");
    let out = bin().args(["dualize", f.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    assert_eq!(stdout_of(&out), "\n");
}

#[test]
fn dualize_writes_a_json_report() {
    let f = scratch("four-report.hg", FOUR);
    let rep = scratch("report.json", "");
    let out = bin()
        .args([
            "dualize",
            f.to_str().unwrap(),
            "--report",
            rep.to_str().unwrap(),
            "--buffer",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(v["terms"], 4);
    assert_eq!(v["clauses"], 4);
    assert_eq!(v["used_vars"], 4);
    assert_eq!(v["truncated"], false);
    assert_eq!(v["ordering_source"], "smallest-last");
}

#[test]
fn dualize_honors_max_outputs() {
    let f = scratch("four-cap.hg", FOUR);
    let out = bin()
        .args(["dualize", f.to_str().unwrap(), "--max-outputs", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_of(&out).lines().count(), 2);
    assert!(stderr_of(&out).contains("truncated"));
}

#[test]
fn dualize_rejects_malformed_input() {
    for bad in ["2 1\n", "0\n", "p mhg 2\n1\n", "p mhg 2 5\n1\n", "1 x\n"] {
        let f = scratch("bad.hg", bad);
        let out = bin().args(["dualize", f.to_str().unwrap()]).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "input {bad:?} should be rejected");
    }
}

#[test]
fn dualize_enforces_the_universe_cap() {
    let f = scratch("huge.hg", "p mhg 5000 1\n1 2\n");
    let out = bin().args(["dualize", f.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_of(&out).contains("cap"));
}

#[test]
fn dualize_reads_stdin() {
    let mut child = bin()
        .args(["dualize", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"1 2\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_of(&out), "1\n2\n");
}

#[test]
fn dualize_gyo_ordering_requires_acyclicity() {
    let cyclic = scratch("cyclic.hg", FOUR);
    let out = bin()
        .args(["dualize", cyclic.to_str().unwrap(), "--ordering", "gyo"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("alpha-acyclic"));

    let acyclic = scratch("acyclic.hg", ACYCLIC);
    let out = bin()
        .args(["dualize", acyclic.to_str().unwrap(), "--ordering", "gyo"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    assert!(!stdout_of(&out).is_empty());
}

#[test]
fn check_decides_both_directions_with_both_algorithms() {
    let f = scratch("chk-f.hg", FOUR);
    let g = scratch("chk-g.hg", FOUR);
    let bad = scratch("chk-bad.hg", FOUR_MISSING);
    for algo in ["a", "b"] {
        let out = bin()
            .args([
                "check",
                f.to_str().unwrap(),
                g.to_str().unwrap(),
                "--algorithm",
                algo,
            ])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
        assert_eq!(stdout_of(&out), "DUAL\n");

        let out = bin()
            .args([
                "check",
                f.to_str().unwrap(),
                bad.to_str().unwrap(),
                "--algorithm",
                algo,
            ])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(1));
        let text = stdout_of(&out);
        assert!(text.starts_with("NOT-DUAL\n"));
        let witness = text
            .lines()
            .nth(1)
            .and_then(|l| l.strip_prefix("witness: "))
            .unwrap();
        assert_eq!(witness.len(), 4);
        assert!(witness.bytes().all(|b| b == b'0' || b == b'1'));
    }
}

#[test]
fn check_requires_algorithm_b_for_certificates() {
    let f = scratch("req-f.hg", FOUR);
    let bad = scratch("req-bad.hg", FOUR_MISSING);
    let cert = scratch("req-cert.txt", "");
    let out = bin()
        .args([
            "check",
            f.to_str().unwrap(),
            bad.to_str().unwrap(),
            "--algorithm",
            "a",
            "--emit-cert",
            cert.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn certificates_round_trip_through_verify() {
    let f = scratch("rt-f.hg", FOUR);
    let g = scratch("rt-g.hg", FOUR);
    let bad = scratch("rt-bad.hg", FOUR_MISSING);
    let cert = scratch("rt-cert.txt", "");

    let out = bin()
        .args([
            "check",
            f.to_str().unwrap(),
            bad.to_str().unwrap(),
            "--emit-cert",
            cert.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let check_witness = stdout_of(&out).lines().nth(1).unwrap().to_string();

    let out = bin()
        .args([
            "verify",
            f.to_str().unwrap(),
            bad.to_str().unwrap(),
            cert.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.starts_with("CONFIRMED\n"));
    assert_eq!(text.lines().nth(1).unwrap(), check_witness);

    // the same certificate cannot be replayed against a different pair
    let out = bin()
        .args([
            "verify",
            f.to_str().unwrap(),
            g.to_str().unwrap(),
            cert.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_of(&out).starts_with("INVALID:"));

    // tampering with the volume header is detected
    let text = fs::read_to_string(&cert).unwrap().replace("V:12", "V:13");
    let tampered = scratch("rt-cert-tampered.txt", &text);
    let out = bin()
        .args([
            "verify",
            f.to_str().unwrap(),
            bad.to_str().unwrap(),
            tampered.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_of(&out).starts_with("INVALID:"));
}

#[test]
fn verify_rejects_unparsable_certificates() {
    let f = scratch("vp-f.hg", FOUR);
    let bad = scratch("vp-bad.hg", FOUR_MISSING);
    let cert = scratch("vp-cert.txt", "not a certificate\n");
    let out = bin()
        .args([
            "verify",
            f.to_str().unwrap(),
            bad.to_str().unwrap(),
            cert.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analyze_prints_structure_lines() {
    let f = scratch("an.hg", ACYCLIC);
    let out = bin().args(["analyze", f.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("n: 6\n"));
    assert!(text.contains("m: 4\n"));
    assert!(text.contains("alpha-acyclic: yes\n"));
    assert!(text.contains("gyo-ordering: 5 3 1 6 4 2\n"));
    assert!(text.contains("ordering-source: gyo\n"));
    assert!(text.contains("max-group: 1\n"));
    assert!(text.contains("degeneracy: 1\n"));
    assert!(text.contains("guarantee: alpha-acyclic"));
}

#[test]
fn bench_writes_csv_rows() {
    let csv = scratch("bench.csv", "");
    let out = bin()
        .args([
            "bench",
            "--family",
            "star",
            "--sizes",
            "4,8",
            "--runs",
            "1",
            "--out",
            csv.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("family,n,run,outputs"));
    assert!(lines[1].starts_with("star,4,0,"));
    assert!(lines[2].starts_with("star,8,0,"));
    assert!(stderr_of(&out).contains("growth exponent"));
}

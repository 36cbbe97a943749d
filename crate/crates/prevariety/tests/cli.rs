//! End-to-end checks of the installed binary: output document shape,
//! worker invariance, mode equality, exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn prevariety(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prevariety"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 output")
}

/// The CONE/RAYS/RAY/MAXIMAL block, skipping the run-specific header.
fn body_section(doc: &str) -> String {
    doc.lines()
        .filter(|l| {
            l.starts_with("CONE") || l.starts_with("RAYS") || l.starts_with("RAY ")
                || l.starts_with("MAXIMAL")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn cyclic4_reports_two_rays() {
    let out = prevariety(&["--system", "cyclic", "--n", "4", "--rays"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("rays: 2"), "{text}");
    assert!(text.contains("RAYS count=2"));
    assert!(text.starts_with("PREVARIETY v1\nsystem: cyclic-4\nn: 4\nfans: 4\n"));
}

#[test]
fn cyclic5_reports_zero_rays() {
    let out = prevariety(&["--system", "cyclic", "--n", "5", "--rays"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("rays: 0"));
}

#[test]
fn worker_count_does_not_change_the_document_body() {
    let base = prevariety(&["--system", "cyclic", "--n", "6", "--workers", "1", "--seed", "7"]);
    let wide = prevariety(&["--system", "cyclic", "--n", "6", "--workers", "8", "--seed", "7"]);
    assert!(base.status.success() && wide.status.success());
    assert_eq!(body_section(&stdout(&base)), body_section(&stdout(&wide)));
    assert!(stdout(&base).contains("workers: 1"));
    assert!(stdout(&wide).contains("workers: 8"));
}

#[test]
fn file_input_modes_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sys.txt");
    std::fs::write(
        &path,
        "variables: x y z\npoly: x*y + y*z + 1\npoly: x^2 + y + z\npoly: x + y^2*z\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let a = prevariety(&["--input", p, "--algorithm", "static"]);
    let b = prevariety(&["--input", p, "--algorithm", "dynamic"]);
    assert!(a.status.success() && b.status.success());
    let rays = |o: &Output| {
        stdout(o)
            .lines()
            .filter(|l| l.starts_with("RAY ") || l.starts_with("RAYS"))
            .map(String::from)
            .collect::<Vec<_>>()
    };
    assert_eq!(rays(&a), rays(&b));
    assert!(stdout(&a).contains("workers: 1"), "static runs single-worker");
}

#[test]
fn output_and_trace_files_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let doc_path = dir.path().join("out.txt");
    let trace_path = dir.path().join("trace.txt");
    let out = prevariety(&[
        "--system", "cyclic", "--n", "6",
        "--workers", "2",
        "--output", doc_path.to_str().unwrap(),
        "--trace", trace_path.to_str().unwrap(),
        "--maximal",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty(), "document goes to the file");

    let doc = std::fs::read_to_string(&doc_path).unwrap();
    assert!(doc.starts_with("PREVARIETY v1\n"));
    assert!(doc.contains("RAYS count=8"));
    assert!(doc.contains("MAXIMAL "));

    let trace = std::fs::read_to_string(&trace_path).unwrap();
    assert!(!trace.is_empty());
    for line in trace.lines() {
        let fields: Vec<_> = line.split_whitespace().collect();
        assert_eq!(fields.len(), 4, "bad trace line {line:?}");
        assert!(["pop", "steal", "emit"].contains(&fields[1]));
    }
}

#[test]
fn stats_go_to_stderr() {
    let out = prevariety(&["--system", "cyclic", "--n", "4", "--stats"]);
    assert!(out.status.success());
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(err.contains("attempted: "));
    assert!(err.contains("pruned: "));
    assert!(!stdout(&out).contains("attempted: "));
}

#[test]
fn bad_usage_exits_one() {
    for args in [
        &["--system", "unknown", "--n", "3"] as &[&str],
        &["--system", "cyclic"],
        &["--input", "/nonexistent/system.txt"],
        &["--workers", "0", "--system", "cyclic", "--n", "4"],
        &[],
    ] {
        let out = prevariety(args);
        assert_eq!(out.status.code(), Some(1), "args {args:?}");
        assert!(!String::from_utf8(out.stderr.clone()).unwrap().is_empty());
    }
}

#[test]
fn malformed_input_file_exits_one_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "variables: x y\npoly: (1,2,3)\n").unwrap();
    let out = prevariety(&["--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn document_round_trips_through_the_parser() {
    let out = prevariety(&["--system", "nvortex", "--n", "3", "--maximal"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let doc = prevariety::report::parse(&text).unwrap();
    assert_eq!(prevariety::report::serialize(&doc), text);
}

#[test]
fn unwritable_output_exits_two() {
    let out = prevariety(&[
        "--system", "cyclic", "--n", "4",
        "--output", Path::new("/nonexistent-dir/out.txt").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

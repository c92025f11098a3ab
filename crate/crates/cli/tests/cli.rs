//! End-to-end tests of the `cubecover` binary: exit codes, report shape,
//! and determinism across thread counts.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cubecover"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_family(dir: &Path, name: &str, construct: &[&str]) -> std::path::PathBuf {
    let path = dir.join(name);
    let out = run(&[
        "construct",
        construct[0],
        "--n",
        construct[1],
        "-o",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    path
}

#[test]
fn construct_writes_expected_line_counts() {
    let out = run(&["construct", "tight", "--n", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);

    let out = run(&["construct", "trivial", "--n", "5"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 2);
}

#[test]
fn construct_tight_n1_is_usage_error() {
    let out = run(&["construct", "tight", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let tight = write_family(dir.path(), "t3.jsonl", &["tight", "3"]);
    let trivial = write_family(dir.path(), "tr2.jsonl", &["trivial", "2"]);

    let out = run(&["verify", tight.to_str().unwrap(), "--predicate", "nondegenerate"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["verdict"], "pass");

    let out = run(&["verify", trivial.to_str().unwrap(), "--predicate", "nondegenerate"]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["verdict"], "fail");
    // trivial_cover(2) = {x1 = 0, x1 = 1}: every vertex misses direction 2,
    // and the lexicographically first violation is at the origin
    assert_eq!(report["witness"]["kind"], "missing-direction");
    assert_eq!(report["witness"]["vertex"], serde_json::json!([0, 0]));
    assert_eq!(report["witness"]["direction"], 2);
}

#[test]
fn malformed_offset_is_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.jsonl");
    std::fs::write(&path, "{\"a\":[1,0],\"b\":\"0.5\"}\n").unwrap();
    let out = run(&["verify", path.to_str().unwrap(), "--predicate", "cover"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("line 1"), "{stderr}");
}

#[test]
fn missing_file_is_input_error() {
    let out = run(&["verify", "/nonexistent.jsonl", "--predicate", "cover"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reduce_axis_family_doubles_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let axis = write_family(dir.path(), "ax4.jsonl", &["axis-slicing", "4"]);
    let expanded = dir.path().join("h4.jsonl");
    let out = run(&[
        "reduce",
        axis.to_str().unwrap(),
        "-C",
        "1",
        "-o",
        expanded.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["output_planes"], "8");

    let out = run(&["verify", expanded.to_str().unwrap(), "--predicate", "nondegenerate"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn reduce_out_of_box_is_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wide.jsonl");
    std::fs::write(&path, "{\"a\":[3,1],\"b\":\"1/2\"}\n").unwrap();
    let out = run(&["reduce", path.to_str().unwrap(), "-C", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("3"), "should name the offending plane: {stderr}");
}

#[test]
fn reduce_non_slicing_input_fails_with_edge_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("partial.jsonl");
    // x1 = 1/2 slices only direction-1 edges of the square
    std::fs::write(&path, "{\"a\":[1,0],\"b\":\"1/2\"}\n").unwrap();
    let out = run(&["reduce", path.to_str().unwrap(), "-C", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["witness"]["unsliced_edge"]["direction"], 2);
}

#[test]
fn witness_reports_bound_on_tight_cover() {
    let dir = tempfile::tempdir().unwrap();
    let tight = write_family(dir.path(), "t4.jsonl", &["tight", "4"]);
    let out = run(&["witness", tight.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["report"]["bound_satisfied"], true);
    assert_eq!(report["report"]["family_size"], 4);
    assert_eq!(report["report"]["claim_origin_separation_ok"], true);
    assert_eq!(report["report"]["claim_subcube_cover_ok"], true);
}

#[test]
fn witness_trace_is_human_readable() {
    let dir = tempfile::tempdir().unwrap();
    let tight = write_family(dir.path(), "t3.jsonl", &["tight", "3"]);
    let out = run(&["witness", tight.to_str().unwrap(), "--trace"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("minimizing vertex"), "{text}");
}

#[test]
fn witness_on_degenerate_family_fails() {
    let dir = tempfile::tempdir().unwrap();
    let trivial = write_family(dir.path(), "tr3.jsonl", &["trivial", "3"]);
    let out = run(&["witness", trivial.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn search_plain_with_oracle() {
    let out = run(&["search", "--mode", "plain", "--n", "3", "--oracle"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["result"]["minimum"], "2");
    assert_eq!(report["result"]["certified"], "complete");
    assert_eq!(report["oracle"], "agrees");
}

#[test]
fn search_slicing_requires_box() {
    let out = run(&["search", "--mode", "slicing", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn end_to_end_certifies_axis_family() {
    let dir = tempfile::tempdir().unwrap();
    let axis = write_family(dir.path(), "ax4.jsonl", &["axis-slicing", "4"]);
    let out = run(&["end-to-end", axis.to_str().unwrap(), "-C", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["verdict"], "pass");
    assert_eq!(report["slicing_planes"], "4");
    assert_eq!(report["expanded_planes"], "8");
    assert_eq!(report["lower_bound_fraction"], "2/2");
}

#[test]
fn end_to_end_box_violation_is_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wide.jsonl");
    std::fs::write(&path, "{\"a\":[2,1],\"b\":\"1/2\"}\n{\"a\":[0,1],\"b\":\"1/2\"}\n").unwrap();
    let out = run(&["end-to-end", path.to_str().unwrap(), "-C", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let axis = write_family(dir.path(), "ax3.jsonl", &["axis-slicing", "3"]);

    let strip_timings = |out: &Output| {
        let mut v = stdout_json(out);
        v.as_object_mut().unwrap().remove("timings");
        v
    };
    let mut reports = Vec::new();
    for threads in ["1", "2", "8"] {
        let search = run(&[
            "search", "--mode", "slicing", "--n", "3", "-C", "1", "--threads", threads,
        ]);
        assert_eq!(search.status.code(), Some(0));
        let e2e = run(&["end-to-end", axis.to_str().unwrap(), "-C", "1", "--threads", threads]);
        assert_eq!(e2e.status.code(), Some(0));
        reports.push((strip_timings(&search), strip_timings(&e2e)));
    }
    assert_eq!(reports[0], reports[1]);
    assert_eq!(reports[0], reports[2]);
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

use sourcing_core::eval::evaluate;
use sourcing_core::ingest::ingest;
use sourcing_core::mutate::{apply_script, Mutation};
use sourcing_core::report::{matrix_report, render_csv, render_text};
use sourcing_core::Scenario;

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/tests/fixtures");

fn fixture(name: &str) -> PathBuf {
    Path::new(FIXTURES).join(name)
}

fn sourcing(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sourcing"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn pretty<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).unwrap() + "\n"
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Ingests the base document into `dir/base.json`.
fn ingest_base(dir: &Path) -> PathBuf {
    let out = dir.join("base.json");
    let run = sourcing(&["ingest", path_str(&fixture("base_raw.csv")), "--out", path_str(&out)]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    out
}

#[test]
fn ingest_then_eval_gives_base_total() {
    let dir = tempfile::tempdir().unwrap();
    let base = ingest_base(dir.path());
    let run = sourcing(&["eval", path_str(&base)]);
    assert_eq!(run.status.code(), Some(0));
    let e: Value = serde_json::from_str(&stdout(&run)).unwrap();
    assert_eq!(e["total_cost"], "485930.00");

    let text = sourcing(&["eval", path_str(&base), "--format", "text"]);
    assert!(stdout(&text).contains("Total Sourcing Cost  485930.00"));
}

#[test]
fn mutate_with_extension_script_gives_extended_total() {
    let dir = tempfile::tempdir().unwrap();
    let base = ingest_base(dir.path());
    let ext = dir.path().join("ext.json");
    let run = sourcing(&[
        "mutate",
        path_str(&base),
        path_str(&fixture("extension_script.json")),
        "--out",
        path_str(&ext),
    ]);
    assert_eq!(run.status.code(), Some(0));
    let e: Value = serde_json::from_str(&stdout(&sourcing(&["eval", path_str(&ext)]))).unwrap();
    assert_eq!(e["total_cost"], "605180.00");
}

#[test]
fn pipeline_output_matches_direct_calls_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let raw = std::fs::read_to_string(fixture("base_raw.csv")).unwrap();
    let script_text = std::fs::read_to_string(fixture("extension_script.json")).unwrap();

    let base = ingest_base(dir.path());
    let direct_base = ingest(&raw, 1000).unwrap();
    assert_eq!(std::fs::read_to_string(&base).unwrap(), pretty(&direct_base));

    let mutated = sourcing(&["mutate", path_str(&base), path_str(&fixture("extension_script.json"))]);
    let script: Vec<Mutation> = serde_json::from_str(&script_text).unwrap();
    let direct_ext = apply_script(&direct_base, &script).unwrap();
    assert_eq!(stdout(&mutated), pretty(&direct_ext));

    let ext = dir.path().join("ext.json");
    std::fs::write(&ext, stdout(&mutated)).unwrap();
    let evaluated = sourcing(&["eval", path_str(&ext)]);
    assert_eq!(stdout(&evaluated), pretty(&evaluate(&direct_ext)));

    let report = sourcing(&["report", path_str(&ext)]);
    assert_eq!(stdout(&report), render_text(&matrix_report(&direct_ext)));
    let report = sourcing(&["report", path_str(&ext), "--format", "csv"]);
    assert_eq!(stdout(&report), render_csv(&matrix_report(&direct_ext)));
}

#[test]
fn validate_reports_negative_capacity() {
    let dir = tempfile::tempdir().unwrap();
    let base = ingest_base(dir.path());
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&base).unwrap()).unwrap();
    doc["suppliers"][2]["capacity"] = Value::from(-10);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, doc.to_string()).unwrap();

    let run = sourcing(&["validate", path_str(&bad)]);
    assert_eq!(run.status.code(), Some(1));
    let lines: Vec<String> = stdout(&run).lines().map(String::from).collect();
    assert_eq!(lines.len(), 1, "{lines:?}");
    assert!(lines[0].contains("India"), "{}", lines[0]);

    let ok = sourcing(&["validate", path_str(&base)]);
    assert_eq!(ok.status.code(), Some(0));

    // Other commands refuse the invalid file as bad input.
    assert_eq!(sourcing(&["eval", path_str(&bad)]).status.code(), Some(3));
}

#[test]
fn solve_prints_optimum_and_applies_it() {
    let dir = tempfile::tempdir().unwrap();
    let base = ingest_base(dir.path());
    let solved = dir.path().join("solved.json");
    let run = sourcing(&["solve", path_str(&base), "--apply", "--out", path_str(&solved)]);
    assert_eq!(run.status.code(), Some(0));
    let result: Value = serde_json::from_str(&stdout(&run)).unwrap();
    assert_eq!(result["status"], "optimal");
    assert_eq!(result["objective"], "3130128.80");
    let e: Value = serde_json::from_str(&stdout(&sourcing(&["eval", path_str(&solved)]))).unwrap();
    assert_eq!(e["total_cost"], "3130128.80");
    assert_eq!(e["diagnostics"], Value::Array(vec![]));
}

#[test]
fn infeasible_solve_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let base = ingest_base(dir.path());
    let script = dir.path().join("script.json");
    std::fs::write(&script, r#"[{"op": "set_required", "args": {"destination": "Chest", "required": 99999999}}]"#).unwrap();
    let short = dir.path().join("short.json");
    sourcing(&["mutate", path_str(&base), path_str(&script), "--out", path_str(&short)]);
    let run = sourcing(&["solve", path_str(&short)]);
    assert_eq!(run.status.code(), Some(1));
    let result: Value = serde_json::from_str(&stdout(&run)).unwrap();
    assert_eq!(result["status"], "infeasible");
}

#[test]
fn rejected_script_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let base = ingest_base(dir.path());
    let script = dir.path().join("script.json");
    std::fs::write(
        &script,
        r#"[{"op": "set_capacity", "args": {"supplier": "Ocean", "capacity": 5}},
            {"op": "remove_supplier", "args": {"name": "Nobody"}}]"#,
    )
    .unwrap();
    let out = dir.path().join("out.json");
    let run = sourcing(&["mutate", path_str(&base), path_str(&script), "--out", path_str(&out)]);
    assert_eq!(run.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&run.stderr).contains("Nobody"));
    assert!(!out.exists());
}

#[test]
fn dry_run_reports_cascades_without_writing() {
    let dir = tempfile::tempdir().unwrap();
    let base = ingest_base(dir.path());
    let script = dir.path().join("script.json");
    std::fs::write(&script, r#"[{"op": "remove_supplier", "args": {"name": "Ocean"}}]"#).unwrap();
    let run = sourcing(&["mutate", path_str(&base), path_str(&script), "--dry-run"]);
    assert_eq!(run.status.code(), Some(0));
    let text = stdout(&run);
    assert!(text.starts_with("step 0 removes 2 lane(s) carrying 2000 units"), "{text}");
    assert!(text.contains("Total Sourcing Cost  396470.00"), "{text}");
}

#[test]
fn input_and_usage_errors_have_distinct_codes() {
    let dir = tempfile::tempdir().unwrap();
    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{ not json").unwrap();
    assert_eq!(sourcing(&["eval", path_str(&garbage)]).status.code(), Some(3));
    assert_eq!(sourcing(&["eval", "/definitely/missing.json"]).status.code(), Some(3));
    assert_eq!(sourcing(&["ingest", path_str(&garbage)]).status.code(), Some(3));
    assert_eq!(sourcing(&["eval"]).status.code(), Some(2));
    assert_eq!(sourcing(&["report", path_str(&garbage), "--format", "xlsx"]).status.code(), Some(2));
    assert_eq!(sourcing(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(sourcing(&["solve", path_str(&garbage), "--apply"]).status.code(), Some(2));
}

#[test]
fn commands_leave_their_inputs_untouched() {
    let dir = tempfile::tempdir().unwrap();
    let base = ingest_base(dir.path());
    let script = fixture("extension_script.json");
    let raw = fixture("base_raw.csv");
    let snapshot = |paths: &[&Path]| -> Vec<Vec<u8>> { paths.iter().map(|p| std::fs::read(p).unwrap()).collect() };
    let before = snapshot(&[&base, &script, &raw]);
    for args in [
        vec!["ingest", path_str(&raw)],
        vec!["validate", path_str(&base)],
        vec!["eval", path_str(&base)],
        vec!["report", path_str(&base), "--format", "csv"],
        vec!["mutate", path_str(&base), path_str(&script)],
        vec!["mutate", path_str(&base), path_str(&script), "--dry-run"],
        vec!["solve", path_str(&base)],
    ] {
        assert!(sourcing(&args).status.success(), "{args:?}");
    }
    assert_eq!(snapshot(&[&base, &script, &raw]), before);
    let mut entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    entries.sort();
    assert_eq!(entries, ["base.json"]);
    let reread: Scenario = serde_json::from_slice(&before[0]).unwrap();
    assert_eq!(evaluate(&reread).total_cost.to_string(), "485930.00");
}

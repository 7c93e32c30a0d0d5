mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn engine(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_normengine"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_case(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn without_timings(json: &str) -> Value {
    let mut v: Value = serde_json::from_str(json).unwrap();
    v.as_object_mut().unwrap().remove("timings_ms");
    v
}

#[test]
fn solve_prints_cause() {
    let dir = tempfile::tempdir().unwrap();
    let case = write_case(dir.path(), "w.nc", common::WORKED_CASE);
    let o = engine(&["solve", "--case", &case]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("b did not stop at time 1 although obliged and able"));
}

#[test]
fn solve_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let case = write_case(dir.path(), "w.nc", common::WORKED_CASE);
    let o = engine(&["solve", "--case", &case, "--json", "--mode", "credulous"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], "normengine.report/v1");
    assert_eq!(v["mode"], "credulous");
    assert_eq!(v["findings"][0]["kind"], "primary_form1");
    assert_eq!(v["findings"][0]["agent"], "b");
    assert_eq!(v["findings"][0]["time"], 1);
}

#[test]
fn ground_dump_reproduces_report() {
    let dir = tempfile::tempdir().unwrap();
    let case = write_case(dir.path(), "w.nc", common::WORKED_CASE);
    let lp = dir.path().join("worked_example.lp");
    let prog = dir.path().join("worked_example.prog");
    let o = engine(&[
        "solve",
        "--case",
        &case,
        "--json",
        "--dump-ground",
        lp.to_str().unwrap(),
        "--dump-program",
        prog.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(fs::read_to_string(&prog)
        .unwrap()
        .contains("% r_follows/default"));
    let again = engine(&["solve", "--ground", lp.to_str().unwrap(), "--json"]);
    assert_eq!(again.status.code(), Some(0), "{}", stderr(&again));
    assert_eq!(
        without_timings(&stdout(&o)),
        without_timings(&stdout(&again))
    );
}

#[test]
fn parse_error_exits_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let case = write_case(dir.path(), "bad.nc", "#agents a.\nholds(stop,a,1\n");
    let o = engine(&["solve", "--case", &case]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.nc:3:1"), "{}", stderr(&o));
}

#[test]
fn missing_file_exits_2() {
    let o = engine(&["solve", "--case", "/nonexistent/case.nc"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn contradiction_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let case = write_case(
        dir.path(),
        "c.nc",
        "#agents a.\nholds(stop,a,1).\n-holds(stop,a,1).\n",
    );
    let o = engine(&["solve", "--case", &case]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("no stable model"));
}

#[test]
fn extra_kb_file_is_loaded() {
    let dir = tempfile::tempdir().unwrap();
    let case = write_case(
        dir.path(),
        "c.nc",
        &format!("{}holds(brake_failure,b,1).\n", common::WORKED_CASE),
    );
    let kb = write_case(
        dir.path(),
        "x.nkb",
        "r_bf: holds(brake_failure,A,T) -> -available(brake,stop,A,T).\n",
    );
    let o = engine(&[
        "solve",
        "--kb",
        "norms_road",
        "--kb",
        &kb,
        "--case",
        &case,
        "--json",
    ]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["derived_anomaly"], true);
    assert_eq!(v["primary_anomaly"], false);
}

#[test]
fn bundled_corpus_passes() {
    let o = engine(&[
        "corpus",
        "--dir",
        common::manifest("corpus").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("0 failed"));
}

#[test]
fn failing_corpus_exits_1_with_diff() {
    let dir = tempfile::tempdir().unwrap();
    write_case(
        dir.path(),
        "wrong.nc",
        &format!(
            "{}#expected d_anomaly.\n#absent p_anomaly.\n",
            common::WORKED_CASE
        ),
    );
    let o = engine(&["corpus", "--dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("FAIL worked_example"), "{out}");
    assert!(out.contains("- expected d_anomaly"), "{out}");
    assert!(out.contains("+ unexpected p_anomaly"), "{out}");
}

#[test]
fn empty_corpus_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = engine(&["corpus", "--dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn ling_dumps_case() {
    let dir = tempfile::tempdir().unwrap();
    let nc = dir.path().join("out.nc");
    let lf = common::manifest("data/worked_example.lf");
    let o = engine(&[
        "ling",
        "--facts",
        lf.to_str().unwrap(),
        "--dump-case",
        nc.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(&nc).unwrap();
    assert!(text.contains("holds(combine(bump,a),b,2)."), "{text}");
    let again = engine(&["solve", "--case", nc.to_str().unwrap()]);
    assert_eq!(stdout(&again), stdout(&o));
}

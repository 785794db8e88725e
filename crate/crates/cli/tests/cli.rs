use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use ness_core::harness::Golden;

fn corpus(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(file)
}

fn ness(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ness"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn backup() -> String {
    corpus("backup.scm.txt").display().to_string()
}

#[test]
fn solve_prints_topological_order() {
    let o = ness(&["solve", &backup(), "--model", "backup", "--context", "shot"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "Trainee = 1\nSupervisor = 0\nVictim = 1\n");
}

#[test]
fn solve_suzy_billy() {
    let file = corpus("suzy_billy.scm.txt");
    let o = ness(&["solve", file.to_str().unwrap(), "--context", "both_throw"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().any(|l| l == "BH = 0"));
}

#[test]
fn missing_context_is_a_usage_error() {
    let o = ness(&["solve", &backup(), "--context", "nobody"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("no context named `nobody`"));
    let o = ness(&["solve", &backup()]);
    assert_eq!(code(&o), 2, "two contexts and none chosen");
}

#[test]
fn cause_with_explanation() {
    let o = ness(&[
        "cause",
        &backup(),
        "Trainee=1",
        "Victim=1",
        "--def",
        "cness",
        "--context",
        "shot",
        "--explain",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "TRUE\npath=(), c'=0\n");

    let o = ness(&[
        "cause",
        &backup(),
        "Trainee=1",
        "Victim=1",
        "--def",
        "bv",
        "--context",
        "shot",
    ]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o), "FALSE\n");
}

#[test]
fn cause_rejects_self_cause_and_unknown_names() {
    let o = ness(&[
        "cause",
        &backup(),
        "Trainee=1",
        "Trainee=1",
        "--def",
        "ness",
        "--context",
        "shot",
    ]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("both"));
    let o = ness(&[
        "cause",
        &backup(),
        "Nobody=1",
        "Victim=1",
        "--def",
        "ness",
        "--context",
        "shot",
    ]);
    assert_eq!(code(&o), 2);
    let o = ness(&[
        "cause",
        &backup(),
        "Trainee=1",
        "Victim=1",
        "--def",
        "inus",
        "--context",
        "shot",
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn every_explanation_reverifies() {
    for (file, ctx) in [
        ("backup.scm.txt", "shot"),
        ("backup.scm.txt", "noshot"),
        ("suzy_billy.scm.txt", "both_throw"),
        ("hp_ness.scm.txt", "actual"),
        ("guarded_chain.scm.txt", "actual"),
    ] {
        let path = corpus(file);
        let path = path.to_str().unwrap();
        let solved = stdout(&ness(&["solve", path, "--context", ctx]));
        let lits: Vec<String> = solved.lines().map(|l| l.replace(" = ", "=")).collect();
        for c in &lits {
            for e in lits
                .iter()
                .filter(|e| e.split('=').next() != c.split('=').next())
            {
                for def in ["cd", "suff", "dness", "ness", "bv", "cness", "hp"] {
                    let o = ness(&[
                        "cause",
                        path,
                        c,
                        e,
                        "--def",
                        def,
                        "--context",
                        ctx,
                        "--explain",
                    ]);
                    assert!(
                        matches!(code(&o), 0 | 1),
                        "{file} {ctx} {def} {c} {e}: {}",
                        stderr(&o)
                    );
                }
            }
        }
    }
}

#[test]
fn matrix_table_and_json() {
    let o = ness(&["matrix", &backup(), "--context", "shot"]);
    assert_eq!(code(&o), 0);
    let table = stdout(&o);
    let row = table
        .lines()
        .find(|l| l.starts_with("Trainee=1 -> Victim=1"))
        .unwrap();
    let marks: Vec<&str> = row.split_whitespace().skip(3).take(7).collect();
    assert_eq!(marks, [".", "x", "x", "x", ".", "x", "x"]);

    let o = ness(&["matrix", &backup(), "--context", "shot", "--json"]);
    assert_eq!(code(&o), 0);
    let golden: Golden = serde_json::from_str(&stdout(&o)).unwrap();
    let r = &golden["Trainee=1 -> Victim=1"];
    assert_eq!(
        (r.cd, r.dness, r.ness, r.bv, r.cness),
        (Some(false), Some(true), Some(true), Some(false), Some(true))
    );
    let again = ness(&["matrix", &backup(), "--context", "shot", "--json"]);
    assert_eq!(stdout(&again), stdout(&o));
}

#[test]
fn check_corpus_passes() {
    let o = ness(&["check", "--corpus"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("0 mismatches"));
}

#[test]
fn flipped_golden_fails_check() {
    let dir = tempfile::tempdir().unwrap();
    for entry in fs::read_dir(corpus("")).unwrap() {
        let entry = entry.unwrap();
        fs::copy(entry.path(), dir.path().join(entry.file_name())).unwrap();
    }
    let golden = dir.path().join("suzy_billy.suzy_idle.golden.json");
    let text = fs::read_to_string(&golden).unwrap();
    fs::write(&golden, text.replace("\"cness\": false", "\"cness\": true")).unwrap();
    let o = ness(&["check", "--corpus-dir", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    let out = stdout(&o);
    assert_eq!(
        out.lines().filter(|l| l.starts_with("MISMATCH")).count(),
        1,
        "{out}"
    );
}

#[test]
fn missing_corpus_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = ness(&[
        "check",
        "--corpus-dir",
        dir.path().join("none").to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn property_check_is_repeatable() {
    let a = ness(&["check", "--properties", "--seeds", "0..0"]);
    let b = ness(&["check", "--properties", "--seeds", "0..0"]);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("models: 1 "));
}

#[test]
fn property_sweep_has_no_characterization_violations() {
    let o = ness(&["check", "--properties", "--seeds", "0..999"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("models: 1000 "));
    let line = out
        .lines()
        .find(|l| l.starts_with("characterization"))
        .unwrap();
    assert!(line.ends_with("violations 0"), "{line}");
}

#[test]
fn fmt_is_a_fixpoint() {
    let o = ness(&["fmt", &backup()]);
    assert_eq!(code(&o), 0);
    let first = stdout(&o);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("printed.scm.txt");
    fs::write(&path, &first).unwrap();
    let second = stdout(&ness(&["fmt", path.to_str().unwrap()]));
    assert_eq!(first, second);
}

#[test]
fn parse_errors_exit_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.scm.txt");
    fs::write(&path, "model m {\n  var X: {0,1} = Y\n}\n").unwrap();
    let o = ness(&["solve", path.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(
        stderr(&o).contains("2:18: undeclared variable"),
        "{}",
        stderr(&o)
    );
}

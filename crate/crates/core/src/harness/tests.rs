use std::fs;

use super::corpus::{load_models, round_trip_failures};
use super::*;
use crate::engine::Setting;
use crate::lang::parse_document;

fn corpus_setting(stem: &str, context: &str) -> Setting {
    let path = bundled_corpus_dir().join(format!("{stem}.scm.txt"));
    let doc = parse_document(&fs::read_to_string(path).unwrap()).unwrap();
    doc.models[0].setting(context).unwrap()
}

fn lit(s: &Setting, text: &str) -> crate::model::Literal {
    s.signature().parse_literal(text).unwrap()
}

#[test]
fn bundled_corpus_passes() {
    let report = run_corpus(&bundled_corpus_dir()).unwrap();
    let failures: Vec<_> = report.failures().collect();
    assert!(failures.is_empty(), "{failures:#?}");
    assert!(report.checks.len() >= 25);
}

#[test]
fn corpus_round_trips() {
    let models = load_models(&bundled_corpus_dir()).unwrap();
    assert_eq!(models.len(), 7);
    assert!(round_trip_failures(&models).is_empty());
}

#[test]
fn flipped_golden_verdict_is_the_only_failure() {
    let dir = tempfile::tempdir().unwrap();
    for entry in fs::read_dir(bundled_corpus_dir()).unwrap() {
        let entry = entry.unwrap();
        fs::copy(entry.path(), dir.path().join(entry.file_name())).unwrap();
    }
    let golden = dir.path().join("backup.shot.golden.json");
    let text = fs::read_to_string(&golden).unwrap();
    fs::write(&golden, text.replace("\"bv\": false", "\"bv\": true")).unwrap();
    let report = run_corpus(dir.path()).unwrap();
    let failures: Vec<_> = report.failures().collect();
    assert_eq!(failures.len(), 1);
    assert_eq!(failures[0].field, "bv");
    assert_eq!(failures[0].pair, "Trainee=1 -> Victim=1");
}

#[test]
fn missing_corpus_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let gone = dir.path().join("nothing here");
    assert!(matches!(
        run_corpus(&gone),
        Err(HarnessError::CorpusMissing(_))
    ));
    assert!(matches!(
        run_corpus(dir.path()),
        Err(HarnessError::CorpusMissing(_))
    ));
}

#[test]
fn unknown_golden_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(
        bundled_corpus_dir().join("backup.scm.txt"),
        dir.path().join("backup.scm.txt"),
    )
    .unwrap();
    fs::write(
        dir.path().join("backup.shot.golden.json"),
        r#"{ "Trainee=1 -> Victim=1": { "nes": true } }"#,
    )
    .unwrap();
    assert!(matches!(
        run_corpus(dir.path()),
        Err(HarnessError::Golden { .. })
    ));
}

#[test]
fn characterization_holds_on_examples() {
    for (stem, ctx) in [
        ("backup", "shot"),
        ("backup", "noshot"),
        ("weak_necessity", "all_on"),
    ] {
        let s = corpus_setting(stem, ctx);
        assert!(
            check_dependence_characterization(&s).unwrap().is_empty(),
            "{stem}/{ctx}"
        );
    }
}

#[test]
fn dependence_under_intervention() {
    let s = corpus_setting("switch", "actual");
    let (c, e) = (lit(&s, "C=1"), lit(&s, "E=1"));
    assert_eq!(
        exists_dependence_under_intervention(&s, c, e).unwrap(),
        None
    );

    let s = corpus_setting("guarded_chain", "actual");
    let (c, e) = (lit(&s, "C=1"), lit(&s, "E=1"));
    assert_eq!(
        exists_dependence_under_intervention(&s, c, e).unwrap(),
        None
    );

    let s = corpus_setting("backup", "noshot");
    let (c, e) = (lit(&s, "Supervisor=1"), lit(&s, "Victim=1"));
    let iv = exists_dependence_under_intervention(&s, c, e)
        .unwrap()
        .unwrap();
    assert!(iv.is_empty());
}

#[test]
fn matrix_rows_for_examples() {
    let s = corpus_setting("backup", "shot");
    let m = verdict_matrix(&s).unwrap();
    assert!(m.violations().is_empty());
    let row = m
        .rows
        .iter()
        .find(|r| r.cause == lit(&s, "Trainee=1") && r.effect == lit(&s, "Victim=1"))
        .unwrap();
    assert_eq!(
        (row.cd, row.dness, row.ness, row.bv, row.cness),
        (false, true, true, false, true)
    );

    let s = corpus_setting("suzy_billy", "both_throw");
    let m = verdict_matrix(&s).unwrap();
    assert!(m.violations().is_empty());
    let row = m
        .rows
        .iter()
        .find(|r| r.cause == lit(&s, "ST=1") && r.effect == lit(&s, "BS=1"))
        .unwrap();
    assert_eq!((row.ness, row.bv, row.cness), (true, false, true));

    let s = corpus_setting("hp_ness", "actual");
    let row = matrix::matrix_row(&s, lit(&s, "C=1"), lit(&s, "E=1")).unwrap();
    assert_eq!((row.ness, row.hp), (false, true));
    assert!(row.check_invariants().is_empty());
}

#[test]
fn matrix_json_matches_golden_schema() {
    let s = corpus_setting("backup", "shot");
    let golden = verdict_matrix(&s).unwrap().to_golden(s.signature());
    let text = serde_json::to_string(&golden).unwrap();
    let back: Golden = serde_json::from_str(&text).unwrap();
    assert_eq!(back, golden);
    assert_eq!(back["Trainee=1 -> Victim=1"].witness, Some(vec![]));
}

#[test]
fn broken_row_is_flagged() {
    let s = corpus_setting("backup", "shot");
    let mut row = matrix::matrix_row(&s, lit(&s, "Trainee=1"), lit(&s, "Victim=1")).unwrap();
    row.cd = true;
    let broken = row.check_invariants();
    assert!(broken.contains(&"cd=>bv"));
    assert!(broken.contains(&"characterization"));
}

#[test]
fn small_sweep_is_clean_and_deterministic() {
    let a = run_properties(0..40).unwrap();
    assert!(a.failures.is_empty(), "{a}");
    assert_eq!(a.models, 40);
    let b = run_properties(0..40).unwrap();
    assert_eq!(
        (a.pairs, a.certificates, &a.checked),
        (b.pairs, b.certificates, &b.checked)
    );
}

#[test]
fn ternary_domains_are_clean() {
    let report = properties::run_properties_with(0..40, |seed| GeneratorConfig {
        domain_size: 3,
        n_endogenous: 4,
        ..GeneratorConfig::new(seed)
    })
    .unwrap();
    assert!(report.failures.is_empty(), "{report}");
}

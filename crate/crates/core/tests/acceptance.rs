//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ness_core::engine::Setting;
use ness_core::harness::corpus::{load_models, round_trip_failures, round_trips};
use ness_core::harness::properties::{run_properties, sweep_config, PropertyReport};
use ness_core::harness::{
    bundled_corpus_dir, generate_model, rewrite_equivalent, run_corpus, verdict_matrix,
    GeneratorConfig,
};

const CORPUS_TIME_LIMIT: Duration = Duration::from_secs(5);
/// Golden values the shipped corpus must contain, so a trimmed corpus
/// cannot pass vacuously.
const MIN_CORPUS_CHECKS: usize = 27;
const SWEEP_MODELS: u64 = 1000;
const SWEEP_TIME_LIMIT: Duration = Duration::from_secs(300);
const MAX_SWEEP_ENDOGENOUS: usize = 6;
const MAX_SWEEP_PARENTS: usize = 3;
const MIN_SUFFICIENCY_INSTANCES: usize = 10_000;
const SYNTAX_MODELS: u64 = 100;
const ROUND_TRIP_DOCUMENTS: u64 = 100;

struct Outcome {
    passed: bool,
    label: &'static str,
    detail: String,
}

fn outcome(passed: bool, label: &'static str, detail: String) -> Outcome {
    Outcome {
        passed,
        label,
        detail,
    }
}

fn corpus_exactness() -> Outcome {
    let label = "1 canonical corpus exactness";
    match run_corpus(&bundled_corpus_dir()) {
        Ok(report) => {
            let mismatches = report.failures().count();
            for f in report.failures() {
                eprintln!(
                    "  mismatch {} {} {}: expected {}, got {}",
                    f.golden, f.pair, f.field, f.expected, f.actual
                );
            }
            let passed = mismatches == 0
                && report.checks.len() >= MIN_CORPUS_CHECKS
                && report.elapsed < CORPUS_TIME_LIMIT;
            outcome(
                passed,
                label,
                format!(
                    "{} checks (min {MIN_CORPUS_CHECKS}), {mismatches} mismatches, {:.3}s (limit {}s)",
                    report.checks.len(),
                    report.elapsed.as_secs_f64(),
                    CORPUS_TIME_LIMIT.as_secs()
                ),
            )
        }
        Err(e) => outcome(false, label, e.to_string()),
    }
}

fn sweep() -> Result<PropertyReport, String> {
    for seed in 0..SWEEP_MODELS {
        let cfg = sweep_config(seed);
        if cfg.n_endogenous > MAX_SWEEP_ENDOGENOUS
            || cfg.max_parents > MAX_SWEEP_PARENTS
            || cfg.domain_size != 2
        {
            return Err(format!(
                "sweep config for seed {seed} exceeds the criterion bounds"
            ));
        }
    }
    run_properties(0..SWEEP_MODELS).map_err(|e| e.to_string())
}

fn property_line(
    report: &Result<PropertyReport, String>,
    label: &'static str,
    properties: &[&str],
) -> Outcome {
    let report = match report {
        Ok(r) => r,
        Err(e) => return outcome(false, label, e.clone()),
    };
    let mut parts = Vec::new();
    let mut passed = report.models as u64 >= SWEEP_MODELS;
    for p in properties {
        let (checked, violations) = (report.checked(p), report.violations(p));
        passed &= violations == 0 && checked > 0;
        parts.push(format!("{p}: {checked} checked, {violations} violations"));
    }
    for f in report
        .failures
        .iter()
        .filter(|f| properties.contains(&f.property))
    {
        eprintln!("  {f}");
    }
    outcome(
        passed,
        label,
        format!("{} models; {}", report.models, parts.join("; ")),
    )
}

fn characterization(report: &Result<PropertyReport, String>) -> Outcome {
    let mut o = property_line(
        report,
        "2 dependence characterization",
        &["characterization"],
    );
    if let Ok(r) = report {
        o.passed &= r.elapsed < SWEEP_TIME_LIMIT;
        o.detail += &format!(
            "; sweep {:.1}s (limit {}s)",
            r.elapsed.as_secs_f64(),
            SWEEP_TIME_LIMIT.as_secs()
        );
    }
    o
}

fn oracle(report: &Result<PropertyReport, String>) -> Outcome {
    let mut o = property_line(
        report,
        "5 oracle equivalence",
        &["sufficiency_oracle", "dness_oracle"],
    );
    if let Ok(r) = report {
        let n = r.checked("sufficiency_oracle");
        o.passed &= n >= MIN_SUFFICIENCY_INSTANCES;
        o.detail += &format!(" (sufficiency min {MIN_SUFFICIENCY_INSTANCES})");
    }
    o
}

fn replay(report: &Result<PropertyReport, String>) -> Outcome {
    let mut o = property_line(report, "7 certificate replay", &["certificate_replay"]);
    if let Ok(r) = report {
        o.passed &= r.certificates > 0;
        o.detail += &format!("; {} certificates emitted", r.certificates);
    }
    o
}

fn syntax_insensitivity() -> Outcome {
    let label = "6 syntax-insensitivity";
    let mut differing = Vec::new();
    let mut rows = 0;
    for seed in 0..SYNTAX_MODELS {
        let cfg = GeneratorConfig {
            domain_size: 2 + (seed % 2) as usize,
            ..sweep_config(seed)
        };
        let g = match generate_model(&cfg) {
            Ok(g) => g,
            Err(e) => return outcome(false, label, e.to_string()),
        };
        let rewritten = rewrite_equivalent(&g.model);
        let same_syntax = g.model.signature().endogenous().any(|v| {
            g.model.mechanism(v).map(|m| m.expr()) == rewritten.mechanism(v).map(|m| m.expr())
        });
        let original = verdict_matrix(&g.setting());
        let other = Setting::new(rewritten, g.context.clone())
            .map_err(|e| e.to_string())
            .and_then(|s| verdict_matrix(&s).map_err(|e| e.to_string()));
        match (original, other) {
            (Ok(a), Ok(b)) if a == b && !same_syntax => rows += a.rows.len(),
            _ => differing.push(seed),
        }
    }
    outcome(
        differing.is_empty(),
        label,
        format!(
            "{SYNTAX_MODELS} models, {rows} matrix rows compared, {} differing (seeds {differing:?})",
            differing.len()
        ),
    )
}

fn round_trip() -> Outcome {
    let label = "8 parse/print round-trip";
    let corpus = match load_models(&bundled_corpus_dir()) {
        Ok(m) => m,
        Err(e) => return outcome(false, label, e.to_string()),
    };
    let corpus_failures = round_trip_failures(&corpus);
    let mut generated_failures = Vec::new();
    for seed in 0..ROUND_TRIP_DOCUMENTS {
        let cfg = GeneratorConfig {
            domain_size: 2 + (seed % 2) as usize,
            ..sweep_config(seed)
        };
        match generate_model(&cfg) {
            Ok(g) if round_trips(&g.document()) => {}
            _ => generated_failures.push(seed),
        }
    }
    outcome(
        corpus_failures.is_empty() && generated_failures.is_empty(),
        label,
        format!(
            "corpus {} files, {} failing; generated {ROUND_TRIP_DOCUMENTS} documents, {} failing",
            corpus.len(),
            corpus_failures.len(),
            generated_failures.len()
        ),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let report = sweep();
    let outcomes = [
        corpus_exactness(),
        characterization(&report),
        property_line(&report, "3 dependence property", &["dependence"]),
        property_line(&report, "4 counterfactual property", &["counterfactual"]),
        oracle(&report),
        syntax_insensitivity(),
        replay(&report),
        round_trip(),
    ];
    for o in &outcomes {
        println!(
            "{} criterion {}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.label,
            o.detail
        );
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        outcomes.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

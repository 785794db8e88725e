//! `ness`: solve models, decide causation queries, print verdict matrices
//! and run the verification suites.
//!
//! Exit codes: 0 success or a true verdict, 1 a false verdict, 2 usage,
//! parse or name errors, 3 an invariant failure.

use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ness_core::engine::{Definition, Setting};
use ness_core::harness::{bundled_corpus_dir, run_corpus, run_properties, verdict_matrix};
use ness_core::lang::{parse_document, print_document, ModelDecl, ModelDocument};

#[derive(Parser)]
#[command(
    name = "ness",
    version,
    about = "Actual causation in structural equation models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Target {
    /// Model file (`.scm.txt`).
    file: PathBuf,
    /// Model name; optional when the file declares one model.
    #[arg(long)]
    model: Option<String>,
    /// Context name; optional when the model declares one context.
    #[arg(long)]
    context: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the solution as `VAR = value` lines in causal order.
    Solve {
        #[command(flatten)]
        target: Target,
    },
    /// Decide whether CAUSE causes EFFECT; prints TRUE or FALSE.
    Cause {
        #[command(flatten)]
        target: Target,
        /// Cause literal, `NAME=value`.
        cause: String,
        /// Effect literal, `NAME=value`.
        effect: String,
        /// One of cd, suff, dness, ness, bv, cness, hp.
        #[arg(long = "def")]
        definition: Definition,
        /// Also print the certificate, after re-checking it.
        #[arg(long)]
        explain: bool,
    },
    /// Every definition for every pair of endogenous variables.
    Matrix {
        #[command(flatten)]
        target: Target,
        /// Print JSON in the golden-file schema.
        #[arg(long)]
        json: bool,
    },
    /// Run the golden corpus and/or the randomized property suite.
    Check {
        /// Run the golden corpus.
        #[arg(long)]
        corpus: bool,
        /// Corpus directory instead of the bundled one; implies `--corpus`.
        #[arg(long, value_name = "DIR")]
        corpus_dir: Option<PathBuf>,
        /// Run the property suite over `--seeds`.
        #[arg(long)]
        properties: bool,
        /// Inclusive seed range `A..B`.
        #[arg(long, default_value = "0..999", value_parser = parse_seeds)]
        seeds: RangeInclusive<u64>,
    },
    /// Print a model file in canonical form.
    Fmt { file: PathBuf },
}

fn parse_seeds(s: &str) -> Result<RangeInclusive<u64>, String> {
    let (a, b) = s.split_once("..").ok_or("expected `A..B`")?;
    let a: u64 = a.trim().parse().map_err(|e| format!("bad start: {e}"))?;
    let b: u64 = b.trim().parse().map_err(|e| format!("bad end: {e}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok(a..=b)
}

enum Failure {
    /// Bad input: exit 2.
    Usage(String),
    /// An internal check failed: exit 3.
    Invariant(String),
}

type Outcome = Result<ExitCode, Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn load(file: &Path) -> Result<ModelDocument, Failure> {
    let text = fs::read_to_string(file).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    parse_document(&text).map_err(|d| usage(format!("{}:\n{d}", file.display())))
}

fn pick<'a, T>(
    items: &'a [T],
    name: Option<&str>,
    name_of: impl Fn(&T) -> &str,
    what: &str,
) -> Result<&'a T, Failure> {
    match name {
        Some(n) => items
            .iter()
            .find(|i| name_of(i) == n)
            .ok_or_else(|| usage(format!("no {what} named `{n}`"))),
        None if items.len() == 1 => Ok(&items[0]),
        None => {
            let names: Vec<&str> = items.iter().map(&name_of).collect();
            Err(usage(format!(
                "choose a {what} with --{what}: {}",
                names.join(", ")
            )))
        }
    }
}

fn resolve(target: &Target) -> Result<(ModelDecl, Setting), Failure> {
    let doc = load(&target.file)?;
    let decl = pick(&doc.models, target.model.as_deref(), |m| &m.name, "model")?.clone();
    let ctx = pick(
        &decl.contexts,
        target.context.as_deref(),
        |c| &c.name,
        "context",
    )?;
    let setting = Setting::new(decl.model.clone(), ctx.context.clone()).map_err(usage)?;
    Ok((decl, setting))
}

fn verdict_code(holds: bool) -> ExitCode {
    if holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn solve(target: &Target) -> Outcome {
    let (decl, setting) = resolve(target)?;
    let sig = decl.model.signature();
    for &v in decl.model.topological_order() {
        let value = sig.domain(v).token(setting.solution().get(v));
        println!("{} = {value}", sig.name(v));
    }
    Ok(ExitCode::SUCCESS)
}

fn cause(target: &Target, cause: &str, effect: &str, def: Definition, explain: bool) -> Outcome {
    let (_, setting) = resolve(target)?;
    let sig = setting.signature();
    let c = sig.parse_literal(cause).map_err(usage)?;
    let e = sig.parse_literal(effect).map_err(usage)?;
    let verdict = setting.decide(def, c, e).map_err(usage)?;
    println!("{}", if verdict.holds { "TRUE" } else { "FALSE" });
    if explain {
        if let Some(cert) = &verdict.certificate {
            if !setting.replay(def, c, e, cert).map_err(usage)? {
                return Err(Failure::Invariant(format!(
                    "{def} certificate failed to re-verify"
                )));
            }
            println!("{}", cert.describe(sig, c.var));
        }
    }
    Ok(verdict_code(verdict.holds))
}

fn matrix(target: &Target, json: bool) -> Outcome {
    let (_, setting) = resolve(target)?;
    let sig = setting.signature();
    let m = verdict_matrix(&setting).map_err(usage)?;
    if json {
        let text = serde_json::to_string_pretty(&m.to_golden(sig)).expect("serializable");
        println!("{text}");
    } else {
        print!("{}", m.render_table(sig));
    }
    let violations = m.violations();
    if violations.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        let lines: Vec<String> = violations
            .iter()
            .map(|&(i, inv)| {
                let r = &m.rows[i];
                format!("{} -> {}: {inv}", sig.show(r.cause), sig.show(r.effect))
            })
            .collect();
        Err(Failure::Invariant(format!(
            "row invariants violated:\n{}",
            lines.join("\n")
        )))
    }
}

fn check(corpus: Option<PathBuf>, properties: bool, seeds: RangeInclusive<u64>) -> Outcome {
    if corpus.is_none() && !properties {
        return Err(usage("nothing to check: pass --corpus and/or --properties"));
    }
    let mut failed = Vec::new();
    if let Some(dir) = corpus {
        let report = run_corpus(&dir).map_err(usage)?;
        let mismatches = report.failures().count();
        println!(
            "corpus: {} checks, {mismatches} mismatches",
            report.checks.len()
        );
        for f in report.failures() {
            println!(
                "MISMATCH {} {} {}: expected {}, got {}",
                f.golden, f.pair, f.field, f.expected, f.actual
            );
        }
        if mismatches > 0 {
            failed.push("corpus");
        }
    }
    if properties {
        let (start, end) = seeds.into_inner();
        let end = end
            .checked_add(1)
            .ok_or_else(|| usage("seed range too large"))?;
        let report = run_properties(start..end).map_err(|e| Failure::Invariant(e.to_string()))?;
        println!("properties: seeds {start}..{}", end - 1);
        print!("{report}");
        if !report.failures.is_empty() {
            failed.push("properties");
        }
    }
    if failed.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(Failure::Invariant(format!("failed: {}", failed.join(", "))))
    }
}

fn fmt(file: &Path) -> Outcome {
    print!("{}", print_document(&load(file)?));
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve { target } => solve(&target),
        Command::Cause {
            target,
            cause: c,
            effect,
            definition,
            explain,
        } => cause(&target, &c, &effect, definition, explain),
        Command::Matrix { target, json } => matrix(&target, json),
        Command::Check {
            corpus,
            corpus_dir,
            properties,
            seeds,
        } => {
            let dir = corpus_dir.or_else(|| corpus.then(bundled_corpus_dir));
            check(dir, properties, seeds)
        }
        Command::Fmt { file } => fmt(&file),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("invariant failure: {msg}");
            ExitCode::from(3)
        }
    }
}

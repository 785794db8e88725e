//! Golden-verdict corpus.
//!
//! A corpus directory holds one model per `<stem>.scm.txt` file and one
//! golden file per checked context, named `<stem>.<context>.golden.json`.
//! A golden file maps `"C=c -> E=e"` to the expected verdicts; absent keys
//! are not checked.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::characterization::exists_dependence_under_intervention;
use super::HarnessError;
use crate::engine::{Certificate, Definition, Setting};
use crate::lang::{parse_document, print_document, ModelDocument};
use crate::model::{Assignment, Literal};

pub const MODEL_SUFFIX: &str = ".scm.txt";
pub const GOLDEN_SUFFIX: &str = ".golden.json";

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenRow {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cd: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suff: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dness: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ness: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bv: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cness: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hp: Option<bool>,
    /// The reported direct NESS witness, as `X=v` strings.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    /// Whether some intervention makes the effect depend on the cause.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iv_dep: Option<bool>,
    /// For each listed `c'`: is `{C=c'}` sufficient for the effect in
    /// `M_{C←c'}`?
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cf_suff: Option<BTreeMap<String, bool>>,
}

pub type Golden = BTreeMap<String, GoldenRow>;

/// The corpus shipped with the source tree.
pub fn bundled_corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

/// One compared value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusCheck {
    pub golden: String,
    pub pair: String,
    pub field: String,
    pub expected: String,
    pub actual: String,
}

impl CorpusCheck {
    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

#[derive(Debug, Clone, Default)]
pub struct CorpusReport {
    pub checks: Vec<CorpusCheck>,
    pub elapsed: Duration,
}

impl CorpusReport {
    pub fn failures(&self) -> impl Iterator<Item = &CorpusCheck> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn all_passed(&self) -> bool {
        self.failures().next().is_none()
    }
}

/// A parsed corpus model file.
#[derive(Debug, Clone)]
pub struct CorpusModel {
    pub path: PathBuf,
    pub stem: String,
    pub source: String,
    pub document: ModelDocument,
}

fn io_error(path: &Path, err: std::io::Error) -> HarnessError {
    HarnessError::Io {
        path: path.to_path_buf(),
        message: err.to_string(),
    }
}

fn file_names(dir: &Path) -> Result<Vec<String>, HarnessError> {
    if !dir.is_dir() {
        return Err(HarnessError::CorpusMissing(dir.to_path_buf()));
    }
    let mut names = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| io_error(dir, e))? {
        let entry = entry.map_err(|e| io_error(dir, e))?;
        if let Some(name) = entry.file_name().to_str() {
            names.push(name.to_string());
        }
    }
    names.sort();
    Ok(names)
}

/// Reads and parses every model file in `dir`, sorted by file name.
pub fn load_models(dir: &Path) -> Result<Vec<CorpusModel>, HarnessError> {
    let mut out = Vec::new();
    for name in file_names(dir)? {
        let Some(stem) = name.strip_suffix(MODEL_SUFFIX) else {
            continue;
        };
        let path = dir.join(&name);
        let source = fs::read_to_string(&path).map_err(|e| io_error(&path, e))?;
        let document = parse_document(&source).map_err(|diagnostics| HarnessError::Parse {
            path: path.clone(),
            diagnostics,
        })?;
        if document.models.len() != 1 {
            return Err(HarnessError::Golden {
                path,
                message: "a corpus file must declare exactly one model".into(),
            });
        }
        out.push(CorpusModel {
            path,
            stem: stem.to_string(),
            source,
            document,
        });
    }
    if out.is_empty() {
        return Err(HarnessError::CorpusMissing(dir.to_path_buf()));
    }
    Ok(out)
}

/// Checks every golden file in `dir` against the engine.
pub fn run_corpus(dir: &Path) -> Result<CorpusReport, HarnessError> {
    let start = Instant::now();
    let models = load_models(dir)?;
    let mut report = CorpusReport::default();
    for name in file_names(dir)? {
        let Some(rest) = name.strip_suffix(GOLDEN_SUFFIX) else {
            continue;
        };
        let path = dir.join(&name);
        let golden_err = |message: String| HarnessError::Golden {
            path: path.clone(),
            message,
        };
        let (stem, context) = rest
            .rsplit_once('.')
            .ok_or_else(|| golden_err("expected `<model>.<context>.golden.json`".into()))?;
        let model = models
            .iter()
            .find(|m| m.stem == stem)
            .ok_or_else(|| golden_err(format!("no model file `{stem}{MODEL_SUFFIX}`")))?;
        let decl = &model.document.models[0];
        let setting = decl.setting(context).ok_or_else(|| {
            golden_err(format!("model `{}` has no context `{context}`", decl.name))
        })?;
        let text = fs::read_to_string(&path).map_err(|e| io_error(&path, e))?;
        let golden: Golden = serde_json::from_str(&text).map_err(|e| golden_err(e.to_string()))?;
        for (pair, row) in &golden {
            let (cause, effect) = parse_pair(&setting, pair).map_err(golden_err)?;
            let checks =
                check_row(&setting, cause, effect, row).map_err(|e| golden_err(e.to_string()))?;
            report.checks.extend(
                checks
                    .into_iter()
                    .map(|(field, expected, actual)| CorpusCheck {
                        golden: name.clone(),
                        pair: pair.clone(),
                        field,
                        expected,
                        actual,
                    }),
            );
        }
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Parse, print, parse again: the second parse must equal the first and the
/// printed text must be stable. Returns the files that fail.
pub fn round_trip_failures(models: &[CorpusModel]) -> Vec<PathBuf> {
    models
        .iter()
        .filter(|m| !round_trips(&m.document))
        .map(|m| m.path.clone())
        .collect()
}

pub fn round_trips(doc: &ModelDocument) -> bool {
    let printed = print_document(doc);
    match parse_document(&printed) {
        Ok(again) => &again == doc && print_document(&again) == printed,
        Err(_) => false,
    }
}

fn parse_pair(setting: &Setting, key: &str) -> Result<(Literal, Literal), String> {
    let (c, e) = key
        .split_once("->")
        .ok_or_else(|| format!("key `{key}` is not of the form `C=c -> E=e`"))?;
    let sig = setting.signature();
    let lit = |s: &str| {
        sig.parse_literal(s.trim())
            .map_err(|e| format!("key `{key}`: {e}"))
    };
    Ok((lit(c)?, lit(e)?))
}

type Outcome = (String, String, String);

fn check_row(
    setting: &Setting,
    cause: Literal,
    effect: Literal,
    row: &GoldenRow,
) -> Result<Vec<Outcome>, HarnessError> {
    let mut out = Vec::new();
    let expected = [
        row.cd, row.suff, row.dness, row.ness, row.bv, row.cness, row.hp,
    ];
    for (def, want) in Definition::ALL.into_iter().zip(expected) {
        let Some(want) = want else { continue };
        let v = setting.decide(def, cause, effect)?;
        out.push((
            def.name().to_string(),
            want.to_string(),
            v.holds.to_string(),
        ));
    }
    if let Some(want) = &row.witness {
        let sig = setting.signature();
        let got = match setting
            .decide(Definition::Dness, cause, effect)?
            .certificate
        {
            Some(Certificate::Witness(w)) => {
                let shown: Vec<String> = w
                    .literals
                    .literals()
                    .iter()
                    .map(|&l| sig.show(l).to_string())
                    .collect();
                format!("{{{}}}", shown.join(", "))
            }
            _ => "none".into(),
        };
        out.push(("witness".into(), format!("{{{}}}", want.join(", ")), got));
    }
    if let Some(want) = row.iv_dep {
        let got = exists_dependence_under_intervention(setting, cause, effect)?.is_some();
        out.push(("iv_dep".into(), want.to_string(), got.to_string()));
    }
    if let Some(map) = &row.cf_suff {
        let sig = setting.signature();
        for (token, want) in map {
            let alt = sig.literal(sig.name(cause.var), token)?;
            let cf = setting.counterfactual(alt)?;
            let got = cf.sufficient(&Assignment::new([alt])?, effect)?;
            out.push((
                format!("cf_suff[{token}]"),
                want.to_string(),
                got.to_string(),
            ));
        }
    }
    Ok(out)
}

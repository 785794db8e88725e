//! Randomized property suite over a seed sweep.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::generator::{generate_model, GeneratorConfig};
use super::matrix::{pair_key, verdict_matrix};
use super::HarnessError;
use crate::engine::Setting;
use crate::model::{Assignment, Literal};

/// Random `(set, effect)` sufficiency instances drawn per model.
pub const SUFFICIENCY_SAMPLES: usize = 16;

pub const PROPERTIES: [&str; 9] = [
    "generator_validity",
    "characterization",
    "dependence",
    "counterfactual",
    "sufficiency_oracle",
    "dness_oracle",
    "containment",
    "direct_ness_parent",
    "certificate_replay",
];

/// Sweep configuration: 3 to 6 binary endogenous variables, up to 3
/// parents each.
pub fn sweep_config(seed: u64) -> GeneratorConfig {
    GeneratorConfig {
        seed,
        n_endogenous: 3 + (seed % 4) as usize,
        max_parents: 3,
        domain_size: 2,
        n_exogenous: 2,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyFailure {
    pub config: GeneratorConfig,
    pub property: &'static str,
    pub detail: String,
}

impl fmt::Display for PropertyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        write!(
            f,
            "{} violated: {} (seed={} n_endogenous={} max_parents={} domain_size={} n_exogenous={})",
            self.property, self.detail, c.seed, c.n_endogenous, c.max_parents, c.domain_size, c.n_exogenous
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct PropertyReport {
    /// `checked` counts the instances each property applies to: rows with a
    /// positive premise for implications, certificates for replay.
    pub models: usize,
    pub pairs: usize,
    pub certificates: usize,
    /// Instances checked per property.
    pub checked: BTreeMap<&'static str, usize>,
    pub failures: Vec<PropertyFailure>,
    pub elapsed: Duration,
}

impl PropertyReport {
    pub fn violations(&self, property: &str) -> usize {
        self.failures
            .iter()
            .filter(|f| f.property == property)
            .count()
    }

    pub fn checked(&self, property: &str) -> usize {
        self.checked.get(property).copied().unwrap_or(0)
    }

    fn merge(&mut self, other: PropertyReport) {
        self.models += other.models;
        self.pairs += other.pairs;
        self.certificates += other.certificates;
        for (k, v) in other.checked {
            *self.checked.entry(k).or_default() += v;
        }
        self.failures.extend(other.failures);
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "models: {}  pairs: {}  certificates: {}",
            self.models, self.pairs, self.certificates
        )?;
        for p in PROPERTIES {
            writeln!(
                f,
                "{p:<20} checked {:>7}  violations {}",
                self.checked(p),
                self.violations(p)
            )?;
        }
        for failure in &self.failures {
            writeln!(f, "{failure}")?;
        }
        Ok(())
    }
}

fn property_of(invariant: &str) -> &'static str {
    match invariant {
        "characterization" => "characterization",
        "cd=>ness" | "cd=>bv" | "cd=>cness" => "dependence",
        "counterfactual" => "counterfactual",
        "dness-oracle" => "dness_oracle",
        "dness=>parent" => "direct_ness_parent",
        "replay" => "certificate_replay",
        _ => "containment",
    }
}

/// Runs every property on the model generated from `cfg`.
pub fn check_model(cfg: &GeneratorConfig) -> Result<PropertyReport, HarnessError> {
    let mut report = PropertyReport {
        models: 1,
        ..PropertyReport::default()
    };
    let fail = |report: &mut PropertyReport, property, detail: String| {
        report.failures.push(PropertyFailure {
            config: *cfg,
            property,
            detail,
        })
    };

    let generated = generate_model(cfg)?;
    let model = &generated.model;
    let sig = model.signature();
    let valid = model.topological_order().len() == cfg.n_endogenous
        && sig
            .endogenous()
            .all(|v| model.parents(v).is_ok_and(|p| p.len() <= cfg.max_parents));
    *report.checked.entry("generator_validity").or_default() += 1;
    if !valid {
        fail(
            &mut report,
            "generator_validity",
            "bounds not respected".into(),
        );
    }

    let setting = generated.setting();
    let matrix = verdict_matrix(&setting)?;
    report.pairs = matrix.rows.len();
    for row in &matrix.rows {
        report.certificates += row.certificates;
        let applicable = [
            ("characterization", true),
            ("dependence", row.cd),
            ("counterfactual", row.bv || row.cness),
            ("dness_oracle", true),
            ("containment", true),
            ("direct_ness_parent", row.dness),
        ];
        for (p, applies) in applicable {
            *report.checked.entry(p).or_default() += usize::from(applies);
        }
        *report.checked.entry("certificate_replay").or_default() += row.certificates;
        for inv in row.check_invariants() {
            let detail = format!("{}: {inv}", pair_key(sig, row.cause, row.effect));
            fail(&mut report, property_of(inv), detail);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed_5eed);
    for _ in 0..SUFFICIENCY_SAMPLES {
        let (set, effect) = random_instance(&setting, &mut rng);
        let fast = setting.sufficient(&set, effect)?;
        let oracle = setting.sufficient_interventional(&set, effect)?;
        *report.checked.entry("sufficiency_oracle").or_default() += 1;
        if fast != oracle {
            let detail = format!(
                "{{{}}} for {}: parent enumeration {fast}, interventional {oracle}",
                sig.show_all(set.literals()),
                sig.show(effect)
            );
            fail(&mut report, "sufficiency_oracle", detail);
        }
    }
    Ok(report)
}

/// An effect literal and a set of literals on other endogenous variables,
/// each included with probability one half. Values are arbitrary, not
/// necessarily actual.
fn random_instance(setting: &Setting, rng: &mut ChaCha8Rng) -> (Assignment, Literal) {
    let sig = setting.signature();
    let endo: Vec<_> = sig.endogenous().collect();
    let e = endo[rng.random_range(0..endo.len())];
    let effect = Literal::new(e, rng.random_range(0..sig.domain(e).len()));
    let mut lits = Vec::new();
    for &v in endo.iter().filter(|&&v| v != e) {
        if rng.random_bool(0.5) {
            lits.push(Literal::new(v, rng.random_range(0..sig.domain(v).len())));
        }
    }
    (Assignment::new(lits).expect("distinct variables"), effect)
}

/// Runs the suite on `sweep_config(seed)` for every seed in `seeds`, in
/// parallel. Results are merged in seed order.
pub fn run_properties(seeds: Range<u64>) -> Result<PropertyReport, HarnessError> {
    run_properties_with(seeds, sweep_config)
}

pub fn run_properties_with(
    seeds: Range<u64>,
    config: impl Fn(u64) -> GeneratorConfig + Sync,
) -> Result<PropertyReport, HarnessError> {
    let start = Instant::now();
    let per_seed: Vec<Result<PropertyReport, HarnessError>> = seeds
        .into_par_iter()
        .map(|s| check_model(&config(s)))
        .collect();
    let mut report = PropertyReport::default();
    for r in per_seed {
        report.merge(r?);
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

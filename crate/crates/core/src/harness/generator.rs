use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::engine::{Definition, Setting};
use crate::lang::{ModelDecl, ModelDocument, NamedContext, Query};
use crate::model::{CausalModel, Context, Expr, ModelBuilder, Signature, VarKind, TRUE};

pub const MAX_ENDOGENOUS: usize = 8;
pub const MAX_PARENTS: usize = 4;
pub const MAX_EXOGENOUS: usize = 2;
pub const MAX_DOMAIN_SIZE: usize = 3;

/// Parameters for one random model. Generation is a pure function of this.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub n_endogenous: usize,
    pub max_parents: usize,
    /// Upper bound on each variable's domain size; every variable draws its
    /// own size from `2..=domain_size`.
    pub domain_size: usize,
    pub n_exogenous: usize,
}

impl GeneratorConfig {
    pub fn new(seed: u64) -> Self {
        GeneratorConfig {
            seed,
            n_endogenous: 5,
            max_parents: 3,
            domain_size: 2,
            n_exogenous: 2,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let check = |ok: bool, what: String| {
            if ok {
                Ok(())
            } else {
                Err(HarnessError::InvalidConfig(what))
            }
        };
        check(
            (1..=MAX_ENDOGENOUS).contains(&self.n_endogenous),
            format!("n_endogenous must be in 1..={MAX_ENDOGENOUS}"),
        )?;
        check(
            self.max_parents <= MAX_PARENTS,
            format!("max_parents must be at most {MAX_PARENTS}"),
        )?;
        check(
            (2..=MAX_DOMAIN_SIZE).contains(&self.domain_size),
            format!("domain_size must be in 2..={MAX_DOMAIN_SIZE}"),
        )?;
        check(
            self.n_exogenous <= MAX_EXOGENOUS,
            format!("n_exogenous must be at most {MAX_EXOGENOUS}"),
        )
    }
}

/// A generated model with its context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub config: GeneratorConfig,
    pub model: CausalModel,
    pub context: Context,
}

impl Generated {
    pub fn setting(&self) -> Setting {
        Setting::new(self.model.clone(), self.context.clone()).expect("generated context is total")
    }
}

impl Generated {
    /// A document holding the model, its context as `drawn`, and one query
    /// per definition on the first two endogenous variables.
    pub fn document(&self) -> ModelDocument {
        let sig = self.model.signature();
        let name = format!("g{}", self.config.seed);
        let endo: Vec<_> = sig.endogenous().collect();
        let solution = self.model.solve(&self.context);
        let queries = match endo.as_slice() {
            [c, e, ..] => Definition::ALL
                .into_iter()
                .map(|definition| Query {
                    definition,
                    cause: solution.literal(*c),
                    effect: solution.literal(*e),
                    model: name.clone(),
                    context: "drawn".into(),
                })
                .collect(),
            _ => Vec::new(),
        };
        ModelDocument {
            models: vec![ModelDecl {
                name,
                model: self.model.clone(),
                contexts: vec![NamedContext {
                    name: "drawn".into(),
                    context: self.context.clone(),
                }],
            }],
            queries,
        }
    }
}

fn domain(size: usize) -> Vec<String> {
    (0..size).map(|v| v.to_string()).collect()
}

/// Draws a random acyclic model. Exogenous variables are `U0, U1, ...`,
/// endogenous ones `V0, V1, ...` in causal order. Each endogenous variable
/// picks up to `max_parents` parents among the exogenous variables and the
/// earlier endogenous ones, and gets a uniformly random function table
/// written as a `case` expression.
pub fn generate_model(cfg: &GeneratorConfig) -> Result<Generated, HarnessError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut builder = ModelBuilder::new();
    // (name, domain size) of every declared variable, in order.
    let mut declared: Vec<(String, usize)> = Vec::new();
    for i in 0..cfg.n_exogenous {
        let size = rng.random_range(2..=cfg.domain_size);
        let name = format!("U{i}");
        builder.exogenous(name.clone(), domain(size));
        declared.push((name, size));
    }
    for i in 0..cfg.n_endogenous {
        let size = rng.random_range(2..=cfg.domain_size);
        let k = rng.random_range(0..=cfg.max_parents.min(declared.len()));
        let mut picked = sample(&mut rng, declared.len(), k).into_vec();
        picked.sort_unstable();
        let parents: Vec<&(String, usize)> = picked.iter().map(|&j| &declared[j]).collect();
        let expr = random_table(&mut rng, &parents, size);
        let name = format!("V{i}");
        builder.endogenous(name.clone(), domain(size), expr);
        declared.push((name, size));
    }
    let model = builder
        .build()
        .map_err(|e| HarnessError::Generator(e.to_string()))?;
    let sig = model.signature();
    let pairs: Vec<_> = sig
        .exogenous()
        .map(|id| (id, rng.random_range(0..sig.domain(id).len())))
        .collect();
    let context = Context::new(sig, pairs).map_err(|e| HarnessError::Generator(e.to_string()))?;
    Ok(Generated {
        config: *cfg,
        model,
        context,
    })
}

fn random_table(rng: &mut ChaCha8Rng, parents: &[&(String, usize)], size: usize) -> Expr {
    let rows: usize = parents.iter().map(|p| p.1).product();
    let outputs: Vec<usize> = (0..rows).map(|_| rng.random_range(0..size)).collect();
    let mut arms = Vec::with_capacity(rows.saturating_sub(1));
    for (row, &out) in outputs.iter().enumerate().take(rows - 1) {
        let mut rest = row;
        let cond = Expr::all(parents.iter().map(|(name, psize)| {
            let v = rest % psize;
            rest /= psize;
            Expr::eq(name.clone(), v.to_string())
        }));
        arms.push((cond, out.to_string()));
    }
    Expr::case(arms, outputs[rows - 1].to_string())
}

/// The same model with every mechanism rewritten into a different but
/// extensionally equal expression: De Morgan duals for `&` and `|`, double
/// negation on atoms, and a dead leading arm in every `case`.
pub fn rewrite_equivalent(model: &CausalModel) -> CausalModel {
    let sig = model.signature();
    let mut builder = ModelBuilder::new();
    for id in sig.ids() {
        let var = sig.var(id);
        let values = var.domain.values().to_vec();
        match var.kind {
            VarKind::Exogenous => builder.exogenous(var.name.clone(), values),
            VarKind::Endogenous => {
                let expr = model.mechanism(id).expect("endogenous").expr();
                builder.endogenous(var.name.clone(), values, rewrite_top(sig, expr))
            }
        };
    }
    builder.build().expect("rewriting preserves validity")
}

fn is_boolean_domain(values: &[String]) -> bool {
    values.iter().all(|v| v == "0" || v == "1")
}

fn rewrite_top(sig: &Signature, expr: &Expr) -> Expr {
    let dead = || Expr::constant(crate::model::FALSE);
    match expr {
        Expr::Case { arms, default } => rewrite_case(arms, default),
        Expr::Var(x) => {
            let id = sig.id(x).expect("declared");
            let values = sig.domain(id).values();
            if is_boolean_domain(values) {
                rewrite_bool(expr)
            } else {
                let (last, init) = values.split_last().expect("non-empty domain");
                Expr::Case {
                    arms: init
                        .iter()
                        .map(|v| (Expr::eq(x.clone(), v.clone()), v.clone()))
                        .collect(),
                    default: last.clone(),
                }
            }
        }
        Expr::Const(v) if v != TRUE && v != crate::model::FALSE => Expr::Case {
            arms: vec![(dead(), v.clone())],
            default: v.clone(),
        },
        _ => rewrite_bool(expr),
    }
}

fn rewrite_case(arms: &[(Expr, String)], default: &str) -> Expr {
    let mut out = vec![(Expr::constant(crate::model::FALSE), default.to_string())];
    out.extend(arms.iter().map(|(c, v)| (rewrite_bool(c), v.clone())));
    Expr::Case {
        arms: out,
        default: default.to_string(),
    }
}

/// Rewrites a boolean-valued expression.
fn rewrite_bool(expr: &Expr) -> Expr {
    match expr {
        Expr::And(a, b) => Expr::not(Expr::or(
            Expr::not(rewrite_bool(a)),
            Expr::not(rewrite_bool(b)),
        )),
        Expr::Or(a, b) => Expr::not(Expr::and(
            Expr::not(rewrite_bool(a)),
            Expr::not(rewrite_bool(b)),
        )),
        Expr::Not(a) => Expr::not(rewrite_bool(a)),
        Expr::Case { arms, default } => rewrite_case(arms, default),
        atom => Expr::not(Expr::not(atom.clone())),
    }
}

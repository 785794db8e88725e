//! Signatures, mechanisms, contexts and interventions for acyclic structural
//! equation models over finite domains.
//!
//! Every mechanism is compiled into a function table over its extensional
//! parents when the model is built. All downstream reasoning reads those
//! tables, never the expression syntax, so two models whose mechanisms denote
//! the same functions behave identically.

mod causal_model;
mod expr;
mod formula;
mod signature;

pub use causal_model::{CausalModel, Mechanism, ModelBuilder, Solution, MAX_TABLE_SIZE};
pub use expr::{Expr, TypeError, FALSE, TRUE};
pub use formula::{CausalFormula, Formula};
pub use signature::{
    Assignment, Context, Domain, Intervention, Literal, LiteralDisplay, LiteralsDisplay, Signature,
    VarId, VarKind, Variable,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` declared twice")]
    DuplicateVariable(String),
    #[error("value `{0}` appears twice in one domain")]
    DuplicateValue(String),
    #[error("domain must be non-empty")]
    EmptyDomain,
    #[error("`{0}` is not a valid identifier or value token")]
    InvalidToken(String),
    #[error("model has no endogenous variables")]
    NoEndogenous,
    #[error("value `{value}` is not in the domain of `{variable}`")]
    ValueOutOfDomain { variable: String, value: String },
    #[error("expected `NAME=value`, got `{0}`")]
    MalformedLiteral(String),
    #[error("variable {0:?} assigned more than once")]
    RepeatedVariable(VarId),
    #[error("`{0}` is not exogenous")]
    NotExogenous(String),
    #[error("`{0}` is not endogenous")]
    NotEndogenous(String),
    #[error("context gives no value for exogenous variable `{0}`")]
    IncompleteContext(String),
    #[error("endogenous variable `{0}` has no mechanism")]
    MissingMechanism(String),
    #[error("mechanism for `{0}` refers to itself")]
    SelfReference(String),
    #[error("ill-typed mechanism for `{target}`: {reason}")]
    IllTypedMechanism { target: String, reason: String },
    #[error("mechanism for `{0}` has too many input combinations")]
    MechanismTooLarge(String),
    #[error("cyclic dependences: {}", .cycle.join(" -> "))]
    CyclicModel { cycle: Vec<String> },
    #[error("context does not belong to this model")]
    ForeignContext,
}

use super::causal_model::{CausalModel, Solution};
use super::signature::{Assignment, Context, Literal};
use super::ModelError;

/// Boolean combination of literals over endogenous variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Lit(Literal),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn lit(lit: Literal) -> Self {
        Formula::Lit(lit)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: Formula) -> Self {
        Formula::Not(Box::new(inner))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn holds_in(&self, solution: &Solution) -> bool {
        match self {
            Formula::Lit(l) => solution.holds(*l),
            Formula::Not(f) => !f.holds_in(solution),
            Formula::And(a, b) => a.holds_in(solution) && b.holds_in(solution),
            Formula::Or(a, b) => a.holds_in(solution) || b.holds_in(solution),
        }
    }

    fn check(&self, model: &CausalModel) -> Result<(), ModelError> {
        match self {
            Formula::Lit(l) => {
                let sig = model.signature();
                if l.var.index() >= sig.len() {
                    return Err(ModelError::UnknownVariable(format!("#{}", l.var.index())));
                }
                if !sig.is_endogenous(l.var) {
                    return Err(ModelError::NotEndogenous(sig.name(l.var).to_string()));
                }
                if l.value >= sig.domain(l.var).len() {
                    return Err(ModelError::ValueOutOfDomain {
                        variable: sig.name(l.var).to_string(),
                        value: format!("#{}", l.value),
                    });
                }
                Ok(())
            }
            Formula::Not(f) => f.check(model),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.check(model)?;
                b.check(model)
            }
        }
    }
}

/// `[Y⃗ ← y⃗] φ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CausalFormula {
    pub prefix: Assignment,
    pub body: Formula,
}

impl CausalFormula {
    pub fn new(prefix: Assignment, body: Formula) -> Self {
        CausalFormula { prefix, body }
    }

    /// A formula with empty intervention prefix.
    pub fn plain(body: Formula) -> Self {
        CausalFormula {
            prefix: Assignment::empty(),
            body,
        }
    }
}

impl CausalModel {
    /// `(M, u⃗) ⊨ φ`: intervene with the prefix, solve, read off the body.
    pub fn evaluate(&self, ctx: &Context, formula: &CausalFormula) -> Result<bool, ModelError> {
        self.check_context(ctx)?;
        formula.body.check(self)?;
        let model = self.intervene(&formula.prefix)?;
        Ok(formula.body.holds_in(&model.solve(ctx)))
    }
}

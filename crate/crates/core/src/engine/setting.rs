use std::sync::OnceLock;

use super::ness::NessGraph;
use super::EngineError;
use crate::model::{Assignment, CausalModel, Context, Literal, Signature, Solution, VarId};

/// A causal setting `(M, u⃗)` together with its unique solution.
#[derive(Debug)]
pub struct Setting {
    model: CausalModel,
    context: Context,
    solution: Solution,
    ness_graph: OnceLock<NessGraph>,
}

impl Clone for Setting {
    fn clone(&self) -> Self {
        Setting {
            model: self.model.clone(),
            context: self.context.clone(),
            solution: self.solution.clone(),
            ness_graph: OnceLock::new(),
        }
    }
}

impl Setting {
    pub fn new(model: CausalModel, context: Context) -> Result<Self, EngineError> {
        model.check_context(&context)?;
        let solution = model.solve(&context);
        Ok(Setting {
            model,
            context,
            solution,
            ness_graph: OnceLock::new(),
        })
    }

    pub fn model(&self) -> &CausalModel {
        &self.model
    }

    pub fn context(&self) -> &Context {
        &self.context
    }

    pub fn solution(&self) -> &Solution {
        &self.solution
    }

    pub fn signature(&self) -> &Signature {
        self.model.signature()
    }

    /// `(M_{X⃗←x⃗}, u⃗)`.
    pub fn intervened(&self, iv: &Assignment) -> Result<Setting, EngineError> {
        Setting::new(self.model.intervene(iv)?, self.context.clone())
    }

    /// `(M_{C←c'}, u⃗)`.
    pub fn counterfactual(&self, lit: Literal) -> Result<Setting, EngineError> {
        Setting::new(self.model.intervene_one(lit)?, self.context.clone())
    }

    pub fn actual(&self, var: VarId) -> Literal {
        self.solution.literal(var)
    }

    pub fn holds(&self, lit: Literal) -> bool {
        self.solution.holds(lit)
    }

    pub(crate) fn ness_graph(&self) -> &NessGraph {
        self.ness_graph.get_or_init(|| NessGraph::build(self))
    }

    /// The literal names a value of an endogenous variable of this model.
    pub(crate) fn check_literal(&self, lit: Literal) -> Result<(), EngineError> {
        let sig = self.signature();
        if lit.var.index() >= sig.len() {
            return Err(
                crate::model::ModelError::UnknownVariable(format!("#{}", lit.var.index())).into(),
            );
        }
        if !sig.is_endogenous(lit.var) {
            return Err(EngineError::ExogenousLiteral(sig.name(lit.var).to_string()));
        }
        if lit.value >= sig.domain(lit.var).len() {
            return Err(crate::model::ModelError::ValueOutOfDomain {
                variable: sig.name(lit.var).to_string(),
                value: format!("#{}", lit.value),
            }
            .into());
        }
        Ok(())
    }

    /// Preconditions shared by every cause/effect query.
    pub(crate) fn check_pair(&self, cause: Literal, effect: Literal) -> Result<(), EngineError> {
        self.check_literal(cause)?;
        self.check_literal(effect)?;
        let sig = self.signature();
        if cause.var == effect.var {
            return Err(EngineError::SelfCause(sig.name(cause.var).to_string()));
        }
        if sig.domain(cause.var).len() < 2 {
            return Err(EngineError::SingleValuedCause(
                sig.name(cause.var).to_string(),
            ));
        }
        Ok(())
    }

    /// Endogenous variables other than `excluded`, sorted by name.
    pub(crate) fn others_by_name(&self, excluded: &[VarId]) -> Vec<VarId> {
        let sig = self.signature();
        let mut out: Vec<VarId> = sig.endogenous().filter(|v| !excluded.contains(v)).collect();
        out.sort_by(|a, b| sig.name(*a).cmp(sig.name(*b)));
        out
    }
}

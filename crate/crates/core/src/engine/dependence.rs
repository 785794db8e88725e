use super::{EngineError, Setting};
use crate::model::Literal;

impl Setting {
    /// Counterfactual dependence of `effect` on `cause`. Returns the first
    /// alternative value `c'` (in domain order) under which the effect fails.
    pub fn counterfactually_depends(
        &self,
        cause: Literal,
        effect: Literal,
    ) -> Result<Option<usize>, EngineError> {
        self.check_pair(cause, effect)?;
        if !self.holds(cause) || !self.holds(effect) {
            return Ok(None);
        }
        let size = self.signature().domain(cause.var).len();
        for alt in (0..size).filter(|&v| v != cause.value) {
            let model = self.model().intervene_one(Literal::new(cause.var, alt))?;
            if !model.solve(self.context()).holds(effect) {
                return Ok(Some(alt));
            }
        }
        Ok(None)
    }
}

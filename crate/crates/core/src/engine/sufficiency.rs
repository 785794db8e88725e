use super::{EngineError, Setting};
use crate::model::{Assignment, Literal};

/// Steps a mixed-radix counter. Returns `false` once it wraps back to zero.
pub(crate) fn advance(digits: &mut [usize], sizes: &[usize]) -> bool {
    for (d, &s) in digits.iter_mut().zip(sizes) {
        *d += 1;
        if *d < s {
            return true;
        }
        *d = 0;
    }
    false
}

impl Setting {
    /// Whether `set` is sufficient for `effect`: every completion of the
    /// endogenous variables agreeing with `set` makes the effect's mechanism
    /// output the effect value, exogenous variables fixed by the context.
    ///
    /// Only the effect's parents are enumerated.
    pub fn sufficient(&self, set: &Assignment, effect: Literal) -> Result<bool, EngineError> {
        self.check_set(set, effect)?;
        Ok(self.is_sufficient(set.literals(), effect))
    }

    /// Interventional reading of sufficiency: `[X⃗←x⃗, Y⃗←y⃗] E=e` for every
    /// setting `y⃗` of the remaining endogenous variables. Enumerates every
    /// such intervention and solves the intervened model.
    pub fn sufficient_interventional(
        &self,
        set: &Assignment,
        effect: Literal,
    ) -> Result<bool, EngineError> {
        self.check_set(set, effect)?;
        Ok(self.is_sufficient_interventional(set, effect))
    }

    pub(crate) fn is_sufficient_interventional(&self, set: &Assignment, effect: Literal) -> bool {
        let sig = self.signature();
        let rest: Vec<_> = sig
            .endogenous()
            .filter(|&v| v != effect.var && !set.contains_var(v))
            .collect();
        let sizes: Vec<usize> = rest.iter().map(|&v| sig.domain(v).len()).collect();
        let mut digits = vec![0; rest.len()];
        loop {
            let iv = set
                .union(
                    &Assignment::new(rest.iter().zip(&digits).map(|(&v, &d)| Literal::new(v, d)))
                        .expect("distinct variables"),
                )
                .expect("disjoint from set");
            let model = self.model().intervene(&iv).expect("validated intervention");
            if !model.solve(self.context()).holds(effect) {
                return false;
            }
            if !advance(&mut digits, &sizes) {
                return true;
            }
        }
    }

    /// Core sufficiency check over the effect's parents. `fixed` may mention
    /// non-parents; those are irrelevant to the effect's mechanism.
    pub(crate) fn is_sufficient(&self, fixed: &[Literal], effect: Literal) -> bool {
        let sig = self.signature();
        let mech = self
            .model()
            .mechanism(effect.var)
            .expect("effect is endogenous");
        let parents = mech.parents();
        let mut inputs = vec![0usize; parents.len()];
        let mut free = Vec::new();
        let mut sizes = Vec::new();
        for (i, &p) in parents.iter().enumerate() {
            if !sig.is_endogenous(p) {
                inputs[i] = self.solution().get(p);
            } else if let Some(l) = fixed.iter().find(|l| l.var == p) {
                inputs[i] = l.value;
            } else {
                free.push(i);
                sizes.push(sig.domain(p).len());
            }
        }
        let mut digits = vec![0usize; free.len()];
        loop {
            for (&pos, &d) in free.iter().zip(&digits) {
                inputs[pos] = d;
            }
            if mech.eval_inputs(&inputs) != effect.value {
                return false;
            }
            if !advance(&mut digits, &sizes) {
                return true;
            }
        }
    }

    fn check_set(&self, set: &Assignment, effect: Literal) -> Result<(), EngineError> {
        self.check_literal(effect)?;
        for &lit in set.literals() {
            self.check_literal(lit)?;
        }
        if set.contains_var(effect.var) {
            return Err(EngineError::EffectInSet(
                self.signature().name(effect.var).to_string(),
            ));
        }
        Ok(())
    }
}

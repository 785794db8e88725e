//! A comparison baseline: the HP check exactly as described operationally for
//! the HP-vs-NESS example, not the full HP family.

use itertools::Itertools;

use super::certificate::HpCertificate;
use super::sufficiency::advance;
use super::{EngineError, Setting};
use crate::model::{Assignment, Literal, VarId};

impl Setting {
    /// Searches for an intervention `Z⃗←z⃗` on variables other than cause and
    /// effect such that
    ///
    /// * the effect counterfactually depends on the cause in
    ///   `(M_{Z⃗←z⃗}, u⃗)`, and
    /// * `[C←c, Z⃗'←z⃗', W⃗'←w⃗*] E=e` holds for every subset `Z⃗'` of the
    ///   intervention and every subset `W⃗'` of the remaining variables held
    ///   at their actual values `w⃗*`.
    ///
    /// The cause and effect must hold actually. Interventions are tried by
    /// size, then by variable names, then by values in domain order.
    pub fn hp_cause_described(
        &self,
        cause: Literal,
        effect: Literal,
    ) -> Result<Option<HpCertificate>, EngineError> {
        self.check_pair(cause, effect)?;
        if !self.holds(cause) || !self.holds(effect) {
            return Ok(None);
        }
        let mut found = None;
        self.for_each_intervention(&[cause.var, effect.var], |iv| {
            let Some(alternative) = self.dependence_under(iv, cause, effect) else {
                return false;
            };
            if self.hp_subsets_hold(iv, cause, effect) {
                found = Some(HpCertificate {
                    intervention: iv.clone(),
                    alternative,
                });
                return true;
            }
            false
        });
        Ok(found)
    }

    /// Calls `visit` with every intervention on endogenous variables outside
    /// `excluded`, smallest first, until `visit` returns `true`.
    pub(crate) fn for_each_intervention(
        &self,
        excluded: &[VarId],
        mut visit: impl FnMut(&Assignment) -> bool,
    ) -> bool {
        let sig = self.signature();
        let others = self.others_by_name(excluded);
        for k in 0..=others.len() {
            for vars in others.iter().copied().combinations(k) {
                let sizes: Vec<usize> = vars.iter().map(|&v| sig.domain(v).len()).collect();
                let mut digits = vec![0; vars.len()];
                loop {
                    let iv = Assignment::new(
                        vars.iter().zip(&digits).map(|(&v, &d)| Literal::new(v, d)),
                    )
                    .expect("distinct variables");
                    if visit(&iv) {
                        return true;
                    }
                    if !advance(&mut digits, &sizes) {
                        break;
                    }
                }
            }
        }
        false
    }

    /// Counterfactual dependence of `effect` on `cause` in `(M_{iv}, u⃗)`;
    /// returns the alternative value.
    pub(crate) fn dependence_under(
        &self,
        iv: &Assignment,
        cause: Literal,
        effect: Literal,
    ) -> Option<usize> {
        let model = self.model().intervene(iv).expect("validated intervention");
        let sol = model.solve(self.context());
        if !sol.holds(cause) || !sol.holds(effect) {
            return None;
        }
        let size = self.signature().domain(cause.var).len();
        (0..size).filter(|&v| v != cause.value).find(|&alt| {
            let with_alt = iv
                .with(Literal::new(cause.var, alt))
                .expect("cause not intervened");
            let cf = self
                .model()
                .intervene(&with_alt)
                .expect("validated intervention");
            !cf.solve(self.context()).holds(effect)
        })
    }

    fn hp_subsets_hold(&self, iv: &Assignment, cause: Literal, effect: Literal) -> bool {
        let rest: Vec<Literal> = self
            .others_by_name(&[cause.var, effect.var])
            .into_iter()
            .filter(|&v| !iv.contains_var(v))
            .map(|v| self.actual(v))
            .collect();
        let zs = iv.literals();
        iv_subsets(zs).all(|z_sub| {
            iv_subsets(&rest).all(|w_sub| {
                let fixed = Assignment::new(
                    std::iter::once(cause)
                        .chain(z_sub.iter().copied())
                        .chain(w_sub.iter().copied()),
                )
                .expect("disjoint variables");
                let model = self
                    .model()
                    .intervene(&fixed)
                    .expect("validated intervention");
                model.solve(self.context()).holds(effect)
            })
        })
    }
}

pub(crate) fn iv_subsets(lits: &[Literal]) -> impl Iterator<Item = Vec<Literal>> + '_ {
    (0..=lits.len()).flat_map(move |k| lits.iter().copied().combinations(k))
}

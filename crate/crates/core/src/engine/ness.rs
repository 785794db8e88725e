use std::collections::VecDeque;

use itertools::Itertools;

use super::certificate::{Chain, Path, Witness};
use super::{EngineError, Setting};
use crate::model::{Assignment, Literal, Signature, VarId};

impl Setting {
    /// Direct NESS: some actual witness `W⃗=w⃗` makes `{C=c} ∪ W⃗=w⃗`
    /// sufficient for the effect while `W⃗=w⃗` alone is not.
    ///
    /// Witnesses are drawn from the effect's endogenous parents. The first
    /// witness by size, then by variable names, is returned.
    pub fn direct_ness_cause(
        &self,
        cause: Literal,
        effect: Literal,
    ) -> Result<Option<Witness>, EngineError> {
        self.check_pair(cause, effect)?;
        Ok(self.direct_ness_unchecked(cause, effect))
    }

    /// Reference search for direct NESS over every subset of the endogenous
    /// variables other than cause and effect, using interventional
    /// sufficiency. Exponential in the model size; meant as an oracle.
    pub fn direct_ness_cause_exhaustive(
        &self,
        cause: Literal,
        effect: Literal,
    ) -> Result<Option<Witness>, EngineError> {
        self.check_pair(cause, effect)?;
        if !self.holds(cause) || !self.holds(effect) {
            return Ok(None);
        }
        let candidates = self.others_by_name(&[cause.var, effect.var]);
        for k in 0..=candidates.len() {
            for combo in candidates.iter().combinations(k) {
                let w = Assignment::new(combo.iter().map(|&&v| self.actual(v)))?;
                let with_cause = w.with(cause)?;
                if self.is_sufficient_interventional(&with_cause, effect)
                    && !self.is_sufficient_interventional(&w, effect)
                {
                    return Ok(Some(Witness { literals: w }));
                }
            }
        }
        Ok(None)
    }

    pub(crate) fn direct_ness_unchecked(&self, cause: Literal, effect: Literal) -> Option<Witness> {
        if !self.holds(cause) || !self.holds(effect) {
            return None;
        }
        let parents = self
            .model()
            .endogenous_parents(effect.var)
            .expect("effect is endogenous");
        // A non-parent never changes sufficiency, so it cannot be necessary.
        if !parents.contains(&cause.var) {
            return None;
        }
        let sig = self.signature();
        let mut candidates: Vec<VarId> = parents.into_iter().filter(|&p| p != cause.var).collect();
        candidates.sort_by(|a, b| sig.name(*a).cmp(sig.name(*b)));
        let mut with_cause = Vec::with_capacity(candidates.len() + 1);
        for k in 0..=candidates.len() {
            for combo in candidates.iter().combinations(k) {
                let w: Vec<Literal> = combo.iter().map(|&&v| self.actual(v)).collect();
                with_cause.clear();
                with_cause.extend_from_slice(&w);
                with_cause.push(cause);
                if self.is_sufficient(&with_cause, effect) && !self.is_sufficient(&w, effect) {
                    let literals = Assignment::new(w).expect("distinct parents");
                    return Some(Witness { literals });
                }
            }
        }
        None
    }

    /// NESS: a chain of direct NESS causes from `cause` to `effect` through
    /// actual literals. Returns a shortest chain, ties broken by variable
    /// names.
    pub fn ness_cause(
        &self,
        cause: Literal,
        effect: Literal,
    ) -> Result<Option<Chain>, EngineError> {
        self.check_pair(cause, effect)?;
        if !self.holds(cause) || !self.holds(effect) {
            return Ok(None);
        }
        Ok(self
            .ness_graph()
            .shortest_path(cause.var, effect.var)
            .map(|vars| Chain {
                links: vars.into_iter().map(|v| self.actual(v)).collect(),
            }))
    }

    /// NESS along a fixed path: the path variables, at their values in this
    /// setting, form a chain of direct NESS causes in the given order.
    pub fn ness_cause_along_path(
        &self,
        cause: Literal,
        effect: Literal,
        path: &Path,
    ) -> Result<Option<Chain>, EngineError> {
        self.check_pair(cause, effect)?;
        self.check_path(cause, effect, path)?;
        Ok(self.chain_along(cause, effect, &path.0))
    }

    pub(crate) fn chain_along(
        &self,
        cause: Literal,
        effect: Literal,
        vars: &[VarId],
    ) -> Option<Chain> {
        let mut prev = cause;
        let mut links = Vec::with_capacity(vars.len());
        for &v in vars {
            let lit = self.actual(v);
            self.direct_ness_unchecked(prev, lit)?;
            links.push(lit);
            prev = lit;
        }
        self.direct_ness_unchecked(prev, effect)?;
        Some(Chain { links })
    }

    pub(crate) fn check_path(
        &self,
        cause: Literal,
        effect: Literal,
        path: &Path,
    ) -> Result<(), EngineError> {
        let sig = self.signature();
        for (i, &v) in path.0.iter().enumerate() {
            if v.index() >= sig.len() || !sig.is_endogenous(v) {
                return Err(EngineError::InvalidPath(format!(
                    "variable #{} is not endogenous",
                    v.index()
                )));
            }
            if v == cause.var || v == effect.var {
                return Err(EngineError::PathContainsEndpoint(sig.name(v).to_string()));
            }
            if path.0[..i].contains(&v) {
                return Err(EngineError::InvalidPath(format!(
                    "`{}` repeats",
                    sig.name(v)
                )));
            }
        }
        Ok(())
    }
}

/// Direct NESS relation between the actual literals of a setting, as a graph
/// on endogenous variables. Successor lists are sorted by variable name.
#[derive(Debug)]
pub(crate) struct NessGraph {
    succ: Vec<Vec<VarId>>,
    pred: Vec<Vec<VarId>>,
}

impl NessGraph {
    pub(crate) fn build(setting: &Setting) -> Self {
        let sig = setting.signature();
        let mut succ = vec![Vec::new(); sig.len()];
        let mut pred = vec![Vec::new(); sig.len()];
        for child in sig.endogenous() {
            let parents = setting
                .model()
                .endogenous_parents(child)
                .expect("endogenous");
            for parent in parents {
                if setting
                    .direct_ness_unchecked(setting.actual(parent), setting.actual(child))
                    .is_some()
                {
                    succ[parent.index()].push(child);
                    pred[child.index()].push(parent);
                }
            }
        }
        for list in &mut succ {
            sort_by_name(sig, list);
        }
        NessGraph { succ, pred }
    }

    /// Interior variables of the shortest `from → to` path, lexicographically
    /// least by name among shortest ones.
    pub(crate) fn shortest_path(&self, from: VarId, to: VarId) -> Option<Vec<VarId>> {
        let mut dist = vec![usize::MAX; self.succ.len()];
        dist[to.index()] = 0;
        let mut queue = VecDeque::from([to]);
        while let Some(v) = queue.pop_front() {
            for &p in &self.pred[v.index()] {
                if dist[p.index()] == usize::MAX {
                    dist[p.index()] = dist[v.index()] + 1;
                    queue.push_back(p);
                }
            }
        }
        if dist[from.index()] == usize::MAX {
            return None;
        }
        let mut interior = Vec::new();
        let mut cur = from;
        while dist[cur.index()] > 1 {
            let want = dist[cur.index()] - 1;
            cur = *self.succ[cur.index()]
                .iter()
                .find(|s| dist[s.index()] == want)
                .expect("BFS predecessor");
            interior.push(cur);
        }
        Some(interior)
    }

    /// Interiors of every `from → to` path, by length then by names.
    pub(crate) fn all_paths(&self, sig: &Signature, from: VarId, to: VarId) -> Vec<Vec<VarId>> {
        let mut out = Vec::new();
        let mut stack = vec![from];
        self.collect_paths(from, to, &mut stack, &mut out);
        out.sort_by(|a, b| {
            a.len().cmp(&b.len()).then_with(|| {
                a.iter()
                    .map(|&v| sig.name(v))
                    .cmp(b.iter().map(|&v| sig.name(v)))
            })
        });
        out
    }

    fn collect_paths(
        &self,
        cur: VarId,
        to: VarId,
        stack: &mut Vec<VarId>,
        out: &mut Vec<Vec<VarId>>,
    ) {
        for &next in &self.succ[cur.index()] {
            if next == to {
                out.push(stack[1..].to_vec());
            } else if !stack.contains(&next) {
                stack.push(next);
                self.collect_paths(next, to, stack, out);
                stack.pop();
            }
        }
    }

    /// Whether some `from → to` path has all interior variables in `allowed`.
    pub(crate) fn reaches_within(&self, from: VarId, to: VarId, allowed: &[VarId]) -> bool {
        let mut seen = vec![false; self.succ.len()];
        let mut queue = VecDeque::from([from]);
        seen[from.index()] = true;
        while let Some(v) = queue.pop_front() {
            for &next in &self.succ[v.index()] {
                if next == to {
                    return true;
                }
                if !seen[next.index()] && allowed.contains(&next) {
                    seen[next.index()] = true;
                    queue.push_back(next);
                }
            }
        }
        false
    }
}

pub(crate) fn sort_by_name(sig: &Signature, vars: &mut [VarId]) {
    vars.sort_by(|a, b| sig.name(*a).cmp(sig.name(*b)));
}

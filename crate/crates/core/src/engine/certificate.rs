use itertools::Itertools;

use super::hp::iv_subsets;
use super::{Definition, EngineError, Setting};
use crate::model::{Assignment, CausalFormula, Formula, Literal, Signature, VarId};

/// Companion literals for a direct NESS cause.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Witness {
    pub literals: Assignment,
}

/// Interior literals of a chain of direct NESS causes, possibly empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    pub links: Vec<Literal>,
}

impl Chain {
    pub fn path(&self) -> Path {
        Path(self.links.iter().map(|l| l.var).collect())
    }
}

/// Ordered interior variables of a path, possibly empty.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Path(pub Vec<VarId>);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BvCertificate {
    /// The actual NESS chain.
    pub chain: Chain,
    /// A value `c'` for which `C=c'` does not NESS-cause the effect in
    /// `M_{C←c'}`.
    pub alternative: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CnessCertificate {
    pub path: Path,
    pub alternative: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HpCertificate {
    pub intervention: Assignment,
    /// The value of the cause that breaks the effect under the intervention.
    pub alternative: usize,
}

/// Evidence for a positive verdict.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Certificate {
    /// Counterfactual dependence: the alternative cause value.
    Alternative(usize),
    Witness(Witness),
    Chain(Chain),
    Bv(BvCertificate),
    Cness(CnessCertificate),
    Hp(HpCertificate),
}

impl Certificate {
    /// Human-readable form, e.g. `path=(SH), c'=0`.
    pub fn describe(&self, sig: &Signature, cause_var: VarId) -> String {
        let alt = |v: usize| sig.domain(cause_var).token(v).to_string();
        let chain = |c: &Chain| format!("chain=({})", sig.show_all(&c.links));
        match self {
            Certificate::Alternative(v) => format!("c'={}", alt(*v)),
            Certificate::Witness(w) => {
                format!("witness={{{}}}", sig.show_all(w.literals.literals()))
            }
            Certificate::Chain(c) => chain(c),
            Certificate::Bv(b) => format!("{}, c'={}", chain(&b.chain), alt(b.alternative)),
            Certificate::Cness(c) => format!(
                "path=({}), c'={}",
                c.path.0.iter().map(|&v| sig.name(v)).join(", "),
                alt(c.alternative)
            ),
            Certificate::Hp(h) => format!(
                "intervention=[{}], c'={}",
                h.intervention
                    .literals()
                    .iter()
                    .map(|l| format!("{}<-{}", sig.name(l.var), sig.domain(l.var).token(l.value)))
                    .join(", "),
                alt(h.alternative)
            ),
        }
    }
}

impl Setting {
    /// Re-checks `certificate` as evidence that `cause` is a `definition`
    /// cause of `effect`. Each kind is checked through the defining
    /// conditions, by a route separate from the search that produced it.
    pub fn replay(
        &self,
        definition: Definition,
        cause: Literal,
        effect: Literal,
        certificate: &Certificate,
    ) -> Result<bool, EngineError> {
        self.check_pair(cause, effect)?;
        let sig = self.signature();
        let cause_size = sig.domain(cause.var).len();
        match (definition, certificate) {
            (Definition::Cd, Certificate::Alternative(alt)) => {
                if *alt >= cause_size {
                    return Ok(false);
                }
                let actual =
                    CausalFormula::plain(Formula::and(Formula::lit(cause), Formula::lit(effect)));
                let flipped = CausalFormula::new(
                    Assignment::new([Literal::new(cause.var, *alt)])?,
                    Formula::not(Formula::lit(effect)),
                );
                Ok(self.model().evaluate(self.context(), &actual)?
                    && self.model().evaluate(self.context(), &flipped)?)
            }
            (Definition::Dness, Certificate::Witness(w)) => self.replay_witness(cause, effect, w),
            (Definition::Ness, Certificate::Chain(chain)) => {
                self.replay_chain(cause, effect, chain)
            }
            (Definition::Bv, Certificate::Bv(bv)) => {
                if bv.alternative >= cause_size || !self.replay_chain(cause, effect, &bv.chain)? {
                    return Ok(false);
                }
                let alt = Literal::new(cause.var, bv.alternative);
                Ok(self.counterfactual(alt)?.ness_cause(alt, effect)?.is_none())
            }
            (Definition::Cness, Certificate::Cness(c)) => {
                if c.alternative >= cause_size
                    || self
                        .ness_cause_along_path(cause, effect, &c.path)?
                        .is_none()
                {
                    return Ok(false);
                }
                let alt = Literal::new(cause.var, c.alternative);
                let cf = self.counterfactual(alt)?;
                let order = cf.model().topological_order();
                let mut members = c.path.0.clone();
                members.sort_by_key(|v| order.iter().position(|o| o == v));
                for k in 0..=members.len() {
                    for sub in members.iter().copied().combinations(k) {
                        if cf.ness_cause_along_path(alt, effect, &Path(sub))?.is_some() {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
            (Definition::Hp, Certificate::Hp(h)) => self.replay_hp(cause, effect, h),
            _ => Ok(false),
        }
    }

    fn replay_witness(
        &self,
        cause: Literal,
        effect: Literal,
        w: &Witness,
    ) -> Result<bool, EngineError> {
        let lits = w.literals.literals();
        if lits
            .iter()
            .any(|l| l.var == cause.var || l.var == effect.var)
            || !self.holds(cause)
            || !lits.iter().all(|&l| self.holds(l))
        {
            return Ok(false);
        }
        let with_cause = w.literals.with(cause)?;
        Ok(self.sufficient_interventional(&with_cause, effect)?
            && !self.sufficient_interventional(&w.literals, effect)?)
    }

    fn replay_chain(
        &self,
        cause: Literal,
        effect: Literal,
        chain: &Chain,
    ) -> Result<bool, EngineError> {
        let path = chain.path();
        if self.check_path(cause, effect, &path).is_err() {
            return Ok(false);
        }
        if !chain.links.iter().all(|&l| self.holds(l)) {
            return Ok(false);
        }
        let mut prev = cause;
        for &link in chain.links.iter().chain(std::iter::once(&effect)) {
            match self.direct_ness_cause(prev, link)? {
                Some(w) if self.replay_witness(prev, link, &w)? => prev = link,
                _ => return Ok(false),
            }
        }
        Ok(true)
    }

    fn replay_hp(
        &self,
        cause: Literal,
        effect: Literal,
        h: &HpCertificate,
    ) -> Result<bool, EngineError> {
        let iv = &h.intervention;
        if iv.contains_var(cause.var)
            || iv.contains_var(effect.var)
            || h.alternative == cause.value
            || h.alternative >= self.signature().domain(cause.var).len()
        {
            return Ok(false);
        }
        let eval = |prefix: Assignment, body: Formula| {
            self.model()
                .evaluate(self.context(), &CausalFormula::new(prefix, body))
        };
        let both = Formula::and(Formula::lit(cause), Formula::lit(effect));
        if !eval(Assignment::empty(), both.clone())? || !eval(iv.clone(), both)? {
            return Ok(false);
        }
        let flipped = iv.with(Literal::new(cause.var, h.alternative))?;
        if !eval(flipped, Formula::not(Formula::lit(effect)))? {
            return Ok(false);
        }
        let rest: Vec<Literal> = self
            .signature()
            .endogenous()
            .filter(|&v| v != cause.var && v != effect.var && !iv.contains_var(v))
            .map(|v| self.actual(v))
            .collect();
        for z_sub in iv_subsets(iv.literals()) {
            for w_sub in iv_subsets(&rest) {
                let prefix = Assignment::new(
                    std::iter::once(cause)
                        .chain(z_sub.iter().copied())
                        .chain(w_sub),
                )?;
                if !eval(prefix, Formula::lit(effect))? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

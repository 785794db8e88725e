use std::fmt::Write;

use super::characterization::characterization_rhs;
use super::corpus::{Golden, GoldenRow};
use crate::engine::{Certificate, Definition, EngineError, Setting, Witness};
use crate::model::{Assignment, Literal, Signature};

/// Verdicts of every definition for one `(cause, effect)` pair, plus the
/// facts needed to check the row invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixRow {
    pub cause: Literal,
    pub effect: Literal,
    pub cd: bool,
    pub suff: bool,
    pub dness: bool,
    pub ness: bool,
    pub bv: bool,
    pub cness: bool,
    pub hp: bool,
    pub witness: Option<Witness>,
    /// Direct NESS decided by the exhaustive reference search.
    pub dness_exhaustive: bool,
    pub characterization_rhs: bool,
    pub cause_is_parent: bool,
    /// For every positive BV and CNESS verdict, `{C=c'}` is not sufficient
    /// for the effect in `M_{C←c'}` for the certified `c'`.
    pub counterfactual_ok: bool,
    /// Every certificate in the row replays.
    pub certificates_ok: bool,
    pub certificates: usize,
}

impl MatrixRow {
    pub fn get(&self, def: Definition) -> bool {
        match def {
            Definition::Cd => self.cd,
            Definition::Suff => self.suff,
            Definition::Dness => self.dness,
            Definition::Ness => self.ness,
            Definition::Bv => self.bv,
            Definition::Cness => self.cness,
            Definition::Hp => self.hp,
        }
    }

    /// Names of the row invariants this row violates.
    pub fn check_invariants(&self) -> Vec<&'static str> {
        let implies = |a: bool, b: bool| !a || b;
        let checks = [
            ("dness=>ness", implies(self.dness, self.ness)),
            ("bv=>ness", implies(self.bv, self.ness)),
            ("cness=>ness", implies(self.cness, self.ness)),
            ("cd=>ness", implies(self.cd, self.ness)),
            ("cd=>bv", implies(self.cd, self.bv)),
            ("cd=>cness", implies(self.cd, self.cness)),
            ("cd=>hp", implies(self.cd, self.hp)),
            ("characterization", self.cd == self.characterization_rhs),
            ("dness=>parent", implies(self.dness, self.cause_is_parent)),
            ("dness-oracle", self.dness == self.dness_exhaustive),
            ("counterfactual", self.counterfactual_ok),
            ("replay", self.certificates_ok),
        ];
        checks
            .into_iter()
            .filter(|(_, ok)| !ok)
            .map(|(n, _)| n)
            .collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerdictMatrix {
    pub rows: Vec<MatrixRow>,
}

/// Evaluates all definitions for every ordered pair of distinct endogenous
/// variables at their actual values. Causes with single-valued domains have
/// no alternative and are left out.
pub fn verdict_matrix(setting: &Setting) -> Result<VerdictMatrix, EngineError> {
    let sig = setting.signature();
    let mut causes: Vec<_> = sig
        .endogenous()
        .filter(|&c| sig.domain(c).len() >= 2)
        .collect();
    crate::engine::sort_by_name(sig, &mut causes);
    let mut effects: Vec<_> = sig.endogenous().collect();
    crate::engine::sort_by_name(sig, &mut effects);
    let mut rows = Vec::new();
    for &c in &causes {
        for &e in effects.iter().filter(|&&e| e != c) {
            rows.push(matrix_row(setting, setting.actual(c), setting.actual(e))?);
        }
    }
    Ok(VerdictMatrix { rows })
}

pub fn matrix_row(
    setting: &Setting,
    cause: Literal,
    effect: Literal,
) -> Result<MatrixRow, EngineError> {
    let mut certificates_ok = true;
    let mut counterfactual_ok = true;
    let mut verdicts = [false; 7];
    let mut witness = None;
    let mut certificates = 0;
    for (slot, def) in verdicts.iter_mut().zip(Definition::ALL) {
        let v = setting.decide(def, cause, effect)?;
        *slot = v.holds;
        let Some(cert) = v.certificate else { continue };
        certificates += 1;
        certificates_ok &= setting.replay(def, cause, effect, &cert)?;
        let alternative = match &cert {
            Certificate::Bv(b) => Some(b.alternative),
            Certificate::Cness(c) => Some(c.alternative),
            Certificate::Witness(w) => {
                witness = Some(w.clone());
                None
            }
            _ => None,
        };
        if let Some(alt) = alternative {
            let alt = Literal::new(cause.var, alt);
            let cf = setting.counterfactual(alt)?;
            counterfactual_ok &= !cf.sufficient(&Assignment::new([alt])?, effect)?;
        }
    }
    let [cd, suff, dness, ness, bv, cness, hp] = verdicts;
    Ok(MatrixRow {
        cause,
        effect,
        cd,
        suff,
        dness,
        ness,
        bv,
        cness,
        hp,
        witness,
        dness_exhaustive: setting
            .direct_ness_cause_exhaustive(cause, effect)?
            .is_some(),
        characterization_rhs: characterization_rhs(setting, cause, effect)?,
        cause_is_parent: setting.model().parents(effect.var)?.contains(&cause.var),
        counterfactual_ok,
        certificates_ok,
        certificates,
    })
}

pub fn pair_key(sig: &Signature, cause: Literal, effect: Literal) -> String {
    format!("{} -> {}", sig.show(cause), sig.show(effect))
}

impl VerdictMatrix {
    /// `(row index, invariant name)` for every violation.
    pub fn violations(&self) -> Vec<(usize, &'static str)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.check_invariants().into_iter().map(move |n| (i, n)))
            .collect()
    }

    /// The matrix in the golden-file schema.
    pub fn to_golden(&self, sig: &Signature) -> Golden {
        self.rows
            .iter()
            .map(|r| {
                let row = GoldenRow {
                    cd: Some(r.cd),
                    suff: Some(r.suff),
                    dness: Some(r.dness),
                    ness: Some(r.ness),
                    bv: Some(r.bv),
                    cness: Some(r.cness),
                    hp: Some(r.hp),
                    witness: r.witness.as_ref().map(|w| {
                        w.literals
                            .literals()
                            .iter()
                            .map(|&l| sig.show(l).to_string())
                            .collect()
                    }),
                    ..GoldenRow::default()
                };
                (pair_key(sig, r.cause, r.effect), row)
            })
            .collect()
    }

    /// Plain-text table; `x` marks a true verdict, the last column lists
    /// violated invariants.
    pub fn render_table(&self, sig: &Signature) -> String {
        let keys: Vec<String> = self
            .rows
            .iter()
            .map(|r| pair_key(sig, r.cause, r.effect))
            .collect();
        let width = keys.iter().map(String::len).max().unwrap_or(0).max(4);
        let mut out = format!("{:width$}", "pair");
        for def in Definition::ALL {
            let _ = write!(out, " {:>5}", def.name());
        }
        out.push_str("  invariants\n");
        for (row, key) in self.rows.iter().zip(&keys) {
            let _ = write!(out, "{key:width$}");
            for def in Definition::ALL {
                let _ = write!(out, " {:>5}", if row.get(def) { "x" } else { "." });
            }
            let broken = row.check_invariants();
            if broken.is_empty() {
                out.push_str("  ok\n");
            } else {
                let _ = writeln!(out, "  VIOLATED: {}", broken.join(", "));
            }
        }
        out
    }
}

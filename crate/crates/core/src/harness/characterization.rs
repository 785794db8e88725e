use crate::engine::{EngineError, Setting};
use crate::model::{Assignment, Literal};

/// Searches every intervention on variables other than cause and effect for
/// one under which the effect counterfactually depends on the cause. The
/// empty intervention comes first.
pub fn exists_dependence_under_intervention(
    setting: &Setting,
    cause: Literal,
    effect: Literal,
) -> Result<Option<Assignment>, EngineError> {
    setting.check_pair(cause, effect)?;
    let mut found = None;
    setting.for_each_intervention(&[cause.var, effect.var], |iv| {
        if setting.dependence_under(iv, cause, effect).is_some() {
            found = Some(iv.clone());
            true
        } else {
            false
        }
    });
    Ok(found)
}

/// Right-hand side of the dependence characterization: `C=c` NESS-causes
/// `E=e`, and for some `c'` the effect variable takes a different value `e'`
/// in `M_{C←c'}` that `C=c'` NESS-causes there.
pub fn characterization_rhs(
    setting: &Setting,
    cause: Literal,
    effect: Literal,
) -> Result<bool, EngineError> {
    if setting.ness_cause(cause, effect)?.is_none() {
        return Ok(false);
    }
    let size = setting.signature().domain(cause.var).len();
    for alt in 0..size {
        let alt_lit = Literal::new(cause.var, alt);
        let cf = setting.counterfactual(alt_lit)?;
        let other = cf.actual(effect.var);
        if other.value != effect.value && cf.ness_cause(alt_lit, other)?.is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CharacterizationViolation {
    pub cause: Literal,
    pub effect: Literal,
    pub depends: bool,
    pub rhs: bool,
}

/// Compares both sides of the characterization for every ordered pair of
/// distinct endogenous variables at their actual values. Causes with a
/// single-valued domain are skipped.
pub fn check_dependence_characterization(
    setting: &Setting,
) -> Result<Vec<CharacterizationViolation>, EngineError> {
    let sig = setting.signature();
    let mut out = Vec::new();
    for c in sig.endogenous() {
        if sig.domain(c).len() < 2 {
            continue;
        }
        for e in sig.endogenous().filter(|&e| e != c) {
            let (cause, effect) = (setting.actual(c), setting.actual(e));
            let depends = setting.counterfactually_depends(cause, effect)?.is_some();
            let rhs = characterization_rhs(setting, cause, effect)?;
            if depends != rhs {
                out.push(CharacterizationViolation {
                    cause,
                    effect,
                    depends,
                    rhs,
                });
            }
        }
    }
    Ok(out)
}

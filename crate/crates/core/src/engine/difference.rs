//! NESS combined with a counterfactual difference-making condition.

use super::certificate::{BvCertificate, CnessCertificate, Path};
use super::{EngineError, Setting};
use crate::model::Literal;

impl Setting {
    /// BV: NESS here, and for some `c'` the literal `C=c'` does not
    /// NESS-cause the effect in `(M_{C←c'}, u⃗)`.
    pub fn bv_cause(
        &self,
        cause: Literal,
        effect: Literal,
    ) -> Result<Option<BvCertificate>, EngineError> {
        let Some(chain) = self.ness_cause(cause, effect)? else {
            return Ok(None);
        };
        let size = self.signature().domain(cause.var).len();
        for alt in 0..size {
            let alt_lit = Literal::new(cause.var, alt);
            let cf = self.counterfactual(alt_lit)?;
            if cf.ness_cause(alt_lit, effect)?.is_none() {
                return Ok(Some(BvCertificate {
                    chain,
                    alternative: alt,
                }));
            }
        }
        Ok(None)
    }

    /// CNESS: NESS along some path `p`, and for some `c'` the literal `C=c'`
    /// does not NESS-cause the effect in `(M_{C←c'}, u⃗)` along any path
    /// built from variables of `p` (the empty path included).
    ///
    /// Paths are tried shortest first, then by names; for each path the
    /// alternatives are tried in domain order.
    pub fn cness_cause(
        &self,
        cause: Literal,
        effect: Literal,
    ) -> Result<Option<CnessCertificate>, EngineError> {
        self.check_pair(cause, effect)?;
        if !self.holds(cause) || !self.holds(effect) {
            return Ok(None);
        }
        let paths = self
            .ness_graph()
            .all_paths(self.signature(), cause.var, effect.var);
        if paths.is_empty() {
            return Ok(None);
        }
        let size = self.signature().domain(cause.var).len();
        let counterfactuals = (0..size)
            .map(|alt| self.counterfactual(Literal::new(cause.var, alt)))
            .collect::<Result<Vec<_>, _>>()?;
        for path in paths {
            for (alt, cf) in counterfactuals.iter().enumerate() {
                // Every link of a chain is an actual literal, so a setting
                // where the effect fails has no chain to it at all.
                let blocked = !cf.holds(effect)
                    || !cf.ness_graph().reaches_within(cause.var, effect.var, &path);
                if blocked {
                    return Ok(Some(CnessCertificate {
                        path: Path(path),
                        alternative: alt,
                    }));
                }
            }
        }
        Ok(None)
    }
}

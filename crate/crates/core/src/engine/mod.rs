//! Decision procedures for actual causation.
//!
//! Every procedure runs inside a [`Setting`], a model paired with a context and
//! its solution. Positive verdicts come with a [`Certificate`] that
//! [`Setting::replay`] re-checks through the defining operations.

mod certificate;
mod dependence;
mod difference;
mod hp;
mod ness;
mod setting;
mod sufficiency;

use std::fmt;
use std::str::FromStr;

pub use certificate::{
    BvCertificate, Certificate, Chain, CnessCertificate, HpCertificate, Path, Witness,
};
pub use setting::Setting;

pub(crate) use ness::sort_by_name;

use crate::model::ModelError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("cause and effect are both `{0}`")]
    SelfCause(String),
    #[error("`{0}` is exogenous; causes and effects must be endogenous")]
    ExogenousLiteral(String),
    #[error("cause `{0}` has a single value, so no alternative exists")]
    SingleValuedCause(String),
    #[error("effect variable `{0}` also appears in the set")]
    EffectInSet(String),
    #[error("path contains the endpoint `{0}`")]
    PathContainsEndpoint(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
}

/// The causation definitions a query can ask for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Definition {
    /// Counterfactual dependence.
    Cd,
    /// `{C=c}` is sufficient for `E=e`.
    Suff,
    /// Direct NESS.
    Dness,
    /// NESS via a chain of direct NESS causes.
    Ness,
    Bv,
    Cness,
    /// The HP check as described operationally for the HP-vs-NESS example.
    Hp,
}

impl Definition {
    pub const ALL: [Definition; 7] = [
        Definition::Cd,
        Definition::Suff,
        Definition::Dness,
        Definition::Ness,
        Definition::Bv,
        Definition::Cness,
        Definition::Hp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Definition::Cd => "cd",
            Definition::Suff => "suff",
            Definition::Dness => "dness",
            Definition::Ness => "ness",
            Definition::Bv => "bv",
            Definition::Cness => "cness",
            Definition::Hp => "hp",
        }
    }
}

impl fmt::Display for Definition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown definition `{0}` (expected one of cd, suff, dness, ness, bv, cness, hp)")]
pub struct UnknownDefinition(pub String);

impl FromStr for Definition {
    type Err = UnknownDefinition;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Definition::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| UnknownDefinition(s.to_string()))
    }
}

/// Outcome of one query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub definition: Definition,
    pub holds: bool,
    pub certificate: Option<Certificate>,
}

impl Verdict {
    fn from_option<T>(
        definition: Definition,
        found: Option<T>,
        wrap: impl FnOnce(T) -> Certificate,
    ) -> Self {
        let certificate = found.map(wrap);
        Verdict {
            definition,
            holds: certificate.is_some(),
            certificate,
        }
    }
}

impl Setting {
    /// Runs `definition` on `cause`, `effect`.
    pub fn decide(
        &self,
        definition: Definition,
        cause: crate::model::Literal,
        effect: crate::model::Literal,
    ) -> Result<Verdict, EngineError> {
        use Definition::*;
        Ok(match definition {
            Cd => Verdict::from_option(
                Cd,
                self.counterfactually_depends(cause, effect)?,
                Certificate::Alternative,
            ),
            Suff => {
                self.check_pair(cause, effect)?;
                let set = crate::model::Assignment::new([cause])?;
                Verdict {
                    definition: Suff,
                    holds: self.sufficient(&set, effect)?,
                    certificate: None,
                }
            }
            Dness => Verdict::from_option(
                Dness,
                self.direct_ness_cause(cause, effect)?,
                Certificate::Witness,
            ),
            Ness => Verdict::from_option(Ness, self.ness_cause(cause, effect)?, Certificate::Chain),
            Bv => Verdict::from_option(Bv, self.bv_cause(cause, effect)?, Certificate::Bv),
            Cness => {
                Verdict::from_option(Cness, self.cness_cause(cause, effect)?, Certificate::Cness)
            }
            Hp => {
                Verdict::from_option(Hp, self.hp_cause_described(cause, effect)?, Certificate::Hp)
            }
        })
    }
}

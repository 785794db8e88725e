//! Acyclic structural equation models over finite domains, and decision
//! procedures for actual causation that return replayable certificates.
//!
//! * [`model`]: signatures, mechanisms, interventions, solving and `⊨`.
//! * [`engine`]: counterfactual dependence, sufficiency, direct NESS, NESS,
//!   NESS along a path, BV, CNESS and a described HP check.
//! * [`lang`]: the `.scm.txt` model language.
//! * [`harness`]: random model generation, theorem checkers, verdict
//!   matrices and the golden corpus runner.

pub mod engine;
pub mod harness;
pub mod lang;
pub mod model;

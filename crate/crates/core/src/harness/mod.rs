//! Random model generation, theorem checks, verdict matrices, the golden
//! corpus and the seeded property suite.

pub mod characterization;
pub mod corpus;
pub mod generator;
pub mod matrix;
pub mod properties;

use std::path::PathBuf;

pub use characterization::{
    check_dependence_characterization, exists_dependence_under_intervention,
    CharacterizationViolation,
};
pub use corpus::{bundled_corpus_dir, run_corpus, CorpusReport, Golden, GoldenRow};
pub use generator::{generate_model, rewrite_equivalent, Generated, GeneratorConfig};
pub use matrix::{verdict_matrix, MatrixRow, VerdictMatrix};
pub use properties::{run_properties, sweep_config, PropertyReport};

use crate::engine::EngineError;
use crate::lang::Diagnostics;
use crate::model::ModelError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HarnessError {
    #[error("corpus not found at {0}")]
    CorpusMissing(PathBuf),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("{path}:\n{diagnostics}")]
    Parse {
        path: PathBuf,
        diagnostics: Diagnostics,
    },
    #[error("{path}: {message}")]
    Golden { path: PathBuf, message: String },
    #[error("invalid generator config: {0}")]
    InvalidConfig(String),
    #[error("generator produced an invalid model: {0}")]
    Generator(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

impl From<ModelError> for HarnessError {
    fn from(err: ModelError) -> Self {
        HarnessError::Engine(err.into())
    }
}

#[cfg(test)]
mod tests;

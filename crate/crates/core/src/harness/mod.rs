//! Configuration, seeded generation, command dispatch and reports for the
//! `banded-darboux` binary.

mod commands;
mod config;
mod generate;
pub mod json;
mod table;

use std::path::PathBuf;

use thiserror::Error;

use crate::engine::EngineError;
use crate::factorization::FactorError;
use crate::functionals::FunctionalError;
use crate::relations::RelationError;

pub use commands::{report_dir, run_command, write_outputs, Command, RunOutcome, RunReport, REPORT_DIR_ENV};
pub use config::{FreeSource, InstanceConfig, MatrixSource, NuSource, OutputPaths, Overrides, DEFAULT_BOUND};
pub use generate::{generate, Generated, SHIFT_RETRY_CAP};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_SINGULAR: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("no admissible shift after {attempts} attempts (last tried C = {last})")]
    GenerationExhausted { attempts: usize, last: String },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Functional(#[from] FunctionalError),
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

fn factor_code(e: &FactorError) -> i32 {
    match e {
        FactorError::SingularLeadingMinor(_) | FactorError::ZeroPeelPivot { .. } => EXIT_SINGULAR,
        FactorError::BadFreeSpec(_) => EXIT_CONFIG,
        FactorError::IndexOutOfRange { .. } | FactorError::Banded(_) => EXIT_INTERNAL,
    }
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) | HarnessError::Io { .. } | HarnessError::GenerationExhausted { .. } => EXIT_CONFIG,
            HarnessError::Functional(_) => EXIT_CONFIG,
            HarnessError::Factor(e) => factor_code(e),
            HarnessError::Engine(e) => match e {
                EngineError::HypothesisViolated { .. } => EXIT_HYPOTHESIS,
                EngineError::Factor { source, .. } => factor_code(source),
                EngineError::Functional { .. } => EXIT_CONFIG,
                EngineError::ConsistencyFailure { .. } | EngineError::Internal(_) => EXIT_INTERNAL,
            },
            HarnessError::Relation(_) | HarnessError::VerificationFailed(_) => EXIT_INTERNAL,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            EXIT_CONFIG => "config",
            EXIT_HYPOTHESIS => "hypothesis",
            EXIT_SINGULAR => "singular_minor",
            _ => "internal",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::banded::BandedError;

    #[test]
    fn exit_codes_are_stable() {
        let cases: Vec<(HarnessError, i32)> = vec![
            (HarnessError::Config("x".into()), 1),
            (
                HarnessError::GenerationExhausted {
                    attempts: 3,
                    last: "2".into(),
                },
                1,
            ),
            (HarnessError::Factor(FactorError::SingularLeadingMinor(2)), 3),
            (HarnessError::Factor(FactorError::ZeroPeelPivot { stage: 1, row: 2 }), 3),
            (HarnessError::Factor(FactorError::BadFreeSpec("x".into())), 1),
            (HarnessError::Factor(FactorError::Banded(BandedError::ZeroBand)), 4),
            (
                HarnessError::Engine(EngineError::HypothesisViolated {
                    stage: 0,
                    m: 1,
                    value: "0".into(),
                    partial: None,
                }),
                2,
            ),
            (
                HarnessError::Engine(EngineError::ConsistencyFailure { stage: 0, k: 1 }),
                4,
            ),
            (HarnessError::Engine(EngineError::Internal("x".into())), 4),
            (
                HarnessError::Engine(EngineError::Factor {
                    context: "lu".into(),
                    source: FactorError::SingularLeadingMinor(1),
                }),
                3,
            ),
            (HarnessError::Functional(FunctionalError::InsufficientMoments), 1),
            (HarnessError::VerificationFailed("x".into()), 4),
        ];
        for (err, code) in cases {
            assert_eq!(err.exit_code(), code, "{err}");
        }
    }
}

//! Command-line error classification.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage or input-parse error.

use gapos_core::corpus::CorpusError;
use gapos_core::fitness::FitnessError;
use gapos_core::ga::GaError;
use gapos_core::metrics::MetricsError;
use gapos_core::tables::TableError;
use gapos_core::tagset::TagsetError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    ReadInput {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    WriteOutput {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Tagset { path: String, source: TagsetError },
    #[error("{path}: {source}")]
    Corpus { path: String, source: CorpusError },
    #[error("{path}: {source}")]
    Table { path: String, source: TableError },
    #[error("{0}")]
    InvalidFlag(String),
    #[error("{0}")]
    Ga(#[from] GaError),
    #[error("{0}")]
    Fitness(#[from] FitnessError),
    #[error("{0}")]
    Metrics(#[from] MetricsError),
    #[error("{0}")]
    Csv(String),
}

impl CliError {
    /// 2 for anything wrong with the invocation or its input files,
    /// 1 for failures while computing or writing results.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ReadInput { .. }
            | CliError::Tagset { .. }
            | CliError::Corpus { .. }
            | CliError::Table { .. }
            | CliError::Csv(_)
            | CliError::InvalidFlag(_) => 2,
            CliError::WriteOutput { .. }
            | CliError::Ga(_)
            | CliError::Fitness(_)
            | CliError::Metrics(_) => 1,
        }
    }
}

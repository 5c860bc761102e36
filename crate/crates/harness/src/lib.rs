//! Head-to-head matches between search configurations, table reports, and
//! the small experiments behind the `batchmcts` command.

pub mod matches;
pub mod oracle;
pub mod report;
pub mod spec;
pub mod sweep;
pub mod throughput;

use batchmcts_core::search::ConfigError;
use batchmcts_core::{EvalError, SearchError};
use thiserror::Error;

pub use matches::{run_match, EngineAggregate, MatchReport};
pub use report::{report_table, TableFormat};
pub use spec::{EngineSpec, EvaluatorSpec, GameSpec, MatchSpec};
pub use sweep::sweep;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("unknown sweep parameter `{0}`")]
    UnknownParameter(String),
    #[error("engine {engine} failed in game {game} at move {move_number}: {source}")]
    Engine {
        engine: String,
        game: usize,
        move_number: usize,
        #[source]
        source: SearchError,
    },
    #[error("evaluator setup failed: {0}")]
    Evaluator(#[from] EvalError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) | HarnessError::UnknownParameter(_) => 2,
            HarnessError::Engine { .. } | HarnessError::Evaluator(_) | HarnessError::Io(_) => 3,
        }
    }
}

impl From<ConfigError> for HarnessError {
    fn from(e: ConfigError) -> Self {
        HarnessError::Config(e.to_string())
    }
}

impl From<serde_json::Error> for HarnessError {
    fn from(e: serde_json::Error) -> Self {
        HarnessError::Config(e.to_string())
    }
}

//! Batch PUCT search.

mod batch;
mod config;
mod engine;
mod pucd;
pub mod stats;
mod tt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eval::{EvalError, Evaluator};
use crate::game::GameState;

pub use batch::BatchBuffer;
pub use config::{Baseline, ConfigError, FpuMode, PenaltyMode, SearchConfig};
pub use engine::{BatchSearch, NodeId, NodeStats, RootContext, TreeKind};
pub use pucd::Pucd;
pub use stats::{Counters, DescentResult, MoveStats};
pub use tt::{KeyMap, TranspositionEntry, TranspositionTable};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid search config: {0}")]
    Config(#[from] ConfigError),
    #[error("search started from a finished position")]
    TerminalRoot,
    #[error(transparent)]
    Evaluator(#[from] EvalError),
    #[error("the root position was never evaluated")]
    RootUnevaluated,
    #[error("descent exceeded the game's {limit}-ply limit")]
    DepthExceeded { limit: usize },
}

/// Counters gathered over one search.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    /// States sent to the evaluator.
    pub forwards: u64,
    /// Evaluator calls.
    pub batches: u64,
    /// Main-tree descents that produced a value.
    pub descents: u64,
    pub batch_descents: u64,
    pub last_iteration_descents: u64,
    /// Rounds whose batch came back empty.
    pub saturated_rounds: u64,
    pub main_nodes: usize,
    /// Nodes of the tree the final move was read from.
    pub final_nodes: usize,
    pub tt_entries: usize,
}

impl SearchStats {
    pub fn descents_per_forward(&self) -> f64 {
        self.descents as f64 / self.forwards as f64
    }

    pub fn inferences_per_batch(&self) -> f64 {
        self.forwards as f64 / self.batches as f64
    }
}

/// Instrumentation log entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchEvent {
    Forward { states: usize },
    PutBatch { descents: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    /// Index into the root's legal move list.
    pub move_index: usize,
    pub action: usize,
    pub root_visits: Vec<u32>,
    pub root_means: Vec<Option<f64>>,
    pub stats: SearchStats,
}

/// Runs the search `cfg` describes from `root` with a fresh tree and table.
pub fn search<G, E>(root: &G, cfg: &SearchConfig, evaluator: &E) -> Result<SearchOutcome, SearchError>
where
    G: GameState,
    E: Evaluator<G> + ?Sized,
{
    cfg.validate()?;
    match cfg.baseline {
        Baseline::BatchTree | Baseline::SequentialTree => {
            BatchSearch::new(cfg.effective(), evaluator).run(root)
        }
        Baseline::Pucd => Pucd::new(cfg.clone(), evaluator).run(root),
    }
}

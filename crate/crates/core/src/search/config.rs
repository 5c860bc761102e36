use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Value assumed for a move that has never been visited.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FpuMode {
    Constant(f64),
    /// Best mean among the explored moves, falling back to the node mean.
    BestMean,
    /// Mean of the node itself.
    Mu,
}

/// How a descent that ended on an unevaluated state is charged in the
/// shadow tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PenaltyMode {
    VirtualLoss,
    VirtualMean,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Baseline {
    /// Tree + transposition table with batched evaluation.
    BatchTree,
    /// The same engine forced to batches of one over the same budget.
    SequentialTree,
    /// Sequential PUCT on a DAG whose statistics live in the table.
    Pucd,
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("{0} must be positive")]
    NotPositive(&'static str),
    #[error("max_descents ({max_descents}) must be at least batch_size ({batch_size})")]
    DescentsBelowBatch { max_descents: usize, batch_size: usize },
    #[error("exploration constant must be finite and positive, got {0}")]
    BadConstant(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchConfig {
    /// Exploration constant of the PUCT bandit.
    pub c: f64,
    pub fpu_mode: FpuMode,
    pub penalty_mode: PenaltyMode,
    /// Penalty visits while building a batch.
    pub vl: u32,
    /// Penalty visits during the last iteration.
    pub vll: u32,
    pub batch_size: usize,
    /// Number of get/evaluate/put rounds.
    pub num_batches: usize,
    /// Cap on descents per batch build and per main-tree update loop.
    pub max_descents: usize,
    /// Unknown leaves to reach in the last iteration; 0 disables it.
    pub last_iteration_u: usize,
    pub second_move: bool,
    pub baseline: Baseline,
    /// Use `sqrt(1 + N(s))` instead of `sqrt(N(s))` in the bandit.
    pub plus_one_under_sqrt: bool,
    /// Recorded with results; the search itself is deterministic.
    pub rng_seed: u64,
}

impl Default for SearchConfig {
    /// All heuristics except the last iteration and second move, at the
    /// 32x32 operating point.
    fn default() -> Self {
        SearchConfig {
            c: 0.5,
            fpu_mode: FpuMode::Mu,
            penalty_mode: PenaltyMode::VirtualMean,
            vl: 1,
            vll: 1,
            batch_size: 32,
            num_batches: 32,
            max_descents: 500,
            last_iteration_u: 0,
            second_move: false,
            baseline: Baseline::BatchTree,
            plus_one_under_sqrt: true,
            rng_seed: 0,
        }
    }
}

impl SearchConfig {
    /// Plain sequential PUCT with `budget` evaluations.
    pub fn sequential(budget: usize) -> Self {
        SearchConfig {
            c: 0.2,
            batch_size: 1,
            num_batches: budget,
            baseline: Baseline::SequentialTree,
            ..SearchConfig::default()
        }
    }

    /// Evaluations the search may request.
    pub fn budget(&self) -> usize {
        self.batch_size * self.num_batches
    }

    /// The batch-tree configuration that `baseline` denotes.
    pub fn effective(&self) -> SearchConfig {
        match self.baseline {
            Baseline::SequentialTree => SearchConfig {
                num_batches: self.budget(),
                batch_size: 1,
                ..self.clone()
            },
            _ => self.clone(),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(ConfigError::BadConstant(self.c));
        }
        for (name, v) in [
            ("vl", self.vl as usize),
            ("vll", self.vll as usize),
            ("batch_size", self.batch_size),
            ("num_batches", self.num_batches),
            ("max_descents", self.max_descents),
        ] {
            if v == 0 {
                return Err(ConfigError::NotPositive(name));
            }
        }
        if self.max_descents < self.batch_size {
            return Err(ConfigError::DescentsBelowBatch {
                max_descents: self.max_descents,
                batch_size: self.batch_size,
            });
        }
        Ok(())
    }
}

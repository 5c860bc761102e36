use batchmcts_core::eval::UniformEvaluator;
use batchmcts_core::game::{GameState, SyntheticGame};
use batchmcts_core::{search, SearchConfig, SearchError};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleReport {
    pub engine_move: usize,
    pub minimax_move: usize,
    /// Negamax value of each root move for the player to move.
    pub minimax_values: Vec<f64>,
    pub evaluations: u64,
}

impl OracleReport {
    pub fn agrees(&self) -> bool {
        self.engine_move == self.minimax_move
    }
}

pub fn negamax(state: &SyntheticGame) -> f64 {
    if state.is_terminal() {
        return state.terminal_value();
    }
    state
        .legal_moves()
        .into_iter()
        .map(|a| -negamax(&state.play(a)))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Batch search with the uniform evaluator against exhaustive negamax.
pub fn synthetic_oracle(b: usize, d: usize, seed: u64, budget: usize) -> Result<OracleReport, SearchError> {
    let root = SyntheticGame::new(b, d, seed);
    let batch_size = budget.clamp(1, 32);
    let cfg = SearchConfig {
        batch_size,
        num_batches: (budget / batch_size).max(1),
        ..SearchConfig::default()
    };
    let out = search(&root, &cfg, &UniformEvaluator)?;
    let values: Vec<f64> = root.legal_moves().into_iter().map(|a| -negamax(&root.play(a))).collect();
    let minimax_move = (0..values.len()).fold(0, |best, m| if values[m] > values[best] { m } else { best });
    Ok(OracleReport {
        engine_move: out.move_index,
        minimax_move,
        minimax_values: values,
        evaluations: out.stats.forwards,
    })
}

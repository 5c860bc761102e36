//! Batched leaf evaluators.

mod hex_heuristic;
mod latency;
mod uniform;
pub mod wire;

use thiserror::Error;

use crate::game::GameState;

pub use hex_heuristic::{connection_distance, hex_heuristic_priors, hex_heuristic_value, HexHeuristic};
pub use latency::{LatencyModel, TABLE_FIT};
pub use uniform::UniformEvaluator;
pub use wire::WireEvaluator;

/// Value and move priors for one position, both from the side to move.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub priors: Vec<f64>,
}

impl Evaluation {
    /// Checks the prior vector against the position's move count and clamps
    /// the value into `[-1, 1]`.
    pub fn validated(mut self, num_moves: usize) -> Result<Evaluation, EvalError> {
        if self.priors.len() != num_moves {
            return Err(EvalError::Invalid(format!(
                "{} priors for {} legal moves",
                self.priors.len(),
                num_moves
            )));
        }
        if !self.value.is_finite() || self.priors.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(EvalError::Invalid("non-finite value or negative prior".into()));
        }
        let total: f64 = self.priors.iter().sum();
        if (total - 1.0).abs() > 1e-6 {
            return Err(EvalError::Invalid(format!("priors sum to {total}")));
        }
        self.value = self.value.clamp(-1.0, 1.0);
        Ok(self)
    }
}

#[derive(Debug, Error)]
pub enum EvalError {
    /// Connection dropped or timed out; the request may be retried.
    #[error("evaluator transport failure: {0}")]
    Transport(String),
    #[error("malformed evaluator response: {0}")]
    Malformed(String),
    #[error("evaluator reported an error for request {id}: {message}")]
    Remote { id: u64, message: String },
    #[error("protocol error: {0}")]
    Protocol(String),
    #[error("evaluator returned {got} evaluations for {expected} states")]
    Misaligned { expected: usize, got: usize },
    #[error("invalid evaluation: {0}")]
    Invalid(String),
}

impl EvalError {
    pub fn is_retriable(&self) -> bool {
        matches!(self, EvalError::Transport(_))
    }
}

/// Evaluates a batch of positions in one call. Output is order-aligned with
/// the input.
pub trait Evaluator<G: GameState>: Send + Sync {
    fn evaluate_batch(&self, states: &[G]) -> Result<Vec<Evaluation>, EvalError>;
}

impl<G: GameState, E: Evaluator<G> + ?Sized> Evaluator<G> for &E {
    fn evaluate_batch(&self, states: &[G]) -> Result<Vec<Evaluation>, EvalError> {
        (**self).evaluate_batch(states)
    }
}

impl<G: GameState, E: Evaluator<G> + ?Sized> Evaluator<G> for Box<E> {
    fn evaluate_batch(&self, states: &[G]) -> Result<Vec<Evaluation>, EvalError> {
        (**self).evaluate_batch(states)
    }
}

use super::{EvalError, Evaluation, Evaluator};
use crate::game::GameState;

/// Value 0 and uniform priors everywhere.
#[derive(Clone, Copy, Debug, Default)]
pub struct UniformEvaluator;

impl<G: GameState> Evaluator<G> for UniformEvaluator {
    fn evaluate_batch(&self, states: &[G]) -> Result<Vec<Evaluation>, EvalError> {
        Ok(states
            .iter()
            .map(|s| {
                let k = s.legal_moves().len();
                Evaluation {
                    value: 0.0,
                    priors: vec![1.0 / k as f64; k],
                }
            })
            .collect())
    }
}

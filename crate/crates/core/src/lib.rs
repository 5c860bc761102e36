//! Batch PUCT: Monte Carlo tree search that simulates sequential PUCT while
//! sending leaf positions to the evaluator in batches.
//!
//! Evaluations live in a transposition table; search statistics live in a
//! plain tree with a stamped shadow copy used to assemble the next batch.

pub mod eval;
pub mod game;
pub mod par;
pub mod search;

pub use eval::{EvalError, Evaluation, Evaluator};
pub use game::{GameState, Player, StateKey};
pub use search::{search, SearchConfig, SearchError, SearchOutcome};

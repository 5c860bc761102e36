//! Sequential PUCT on a DAG: statistics are stored per position in the
//! table and shared by every path that reaches it.

use std::collections::HashSet;

use super::config::SearchConfig;
use super::stats::{self, update_statistics, Counters, DescentResult};
use super::tt::KeyMap;
use super::{SearchError, SearchOutcome, SearchStats};
use crate::eval::Evaluator;
use crate::game::{GameState, StateKey};

#[derive(Clone, Debug)]
struct DagNode {
    actions: Vec<usize>,
    priors: Vec<f64>,
    counters: Counters,
}

enum Leaf {
    Reached { evaluated: bool },
    OutOfBudget,
}

pub struct Pucd<'e, G: GameState, E: Evaluator<G> + ?Sized> {
    cfg: SearchConfig,
    evaluator: &'e E,
    table: KeyMap<DagNode>,
    edges: HashSet<(StateKey, usize)>,
    transpositions: u64,
    stats: SearchStats,
    _game: std::marker::PhantomData<fn(&G)>,
}

impl<'e, G: GameState, E: Evaluator<G> + ?Sized> Pucd<'e, G, E> {
    pub fn new(cfg: SearchConfig, evaluator: &'e E) -> Self {
        Pucd {
            cfg,
            evaluator,
            table: KeyMap::default(),
            edges: HashSet::new(),
            transpositions: 0,
            stats: SearchStats::default(),
            _game: std::marker::PhantomData,
        }
    }

    /// Edges first traversed into a position that another path had already
    /// created.
    pub fn transpositions(&self) -> u64 {
        self.transpositions
    }

    pub fn stats(&self) -> &SearchStats {
        &self.stats
    }

    pub fn root_counters(&self, root: &G) -> Option<&Counters> {
        self.table.get(&root.key()).map(|n| &n.counters)
    }

    fn descend(&mut self, root: &G, may_evaluate: bool) -> Result<Leaf, SearchError> {
        let max_plies = root.max_plies();
        let mut path: Vec<(StateKey, usize)> = Vec::new();
        let mut state = root.clone();
        let (value, evaluated) = loop {
            if state.is_terminal() {
                break (state.terminal_value(), false);
            }
            if path.len() >= max_plies {
                return Err(SearchError::DepthExceeded { limit: max_plies });
            }
            let key = state.key();
            if let Some(node) = self.table.get(&key) {
                let m = stats::select_move(&node.counters, &node.priors, &self.cfg);
                let next = state.play(node.actions[m]);
                if self.edges.insert((key, m)) && self.table.contains_key(&next.key()) {
                    self.transpositions += 1;
                }
                path.push((key, m));
                state = next;
                continue;
            }
            if !may_evaluate {
                return Ok(Leaf::OutOfBudget);
            }
            let mut evals = self.evaluator.evaluate_batch(std::slice::from_ref(&state))?;
            if evals.len() != 1 {
                return Err(SearchError::Evaluator(crate::eval::EvalError::Misaligned {
                    expected: 1,
                    got: evals.len(),
                }));
            }
            let actions = state.legal_moves();
            let eval = evals.pop().expect("one evaluation").validated(actions.len())?;
            self.stats.forwards += 1;
            self.stats.batches += 1;
            self.table.insert(
                key,
                DagNode {
                    counters: Counters::seeded(eval.value, actions.len()),
                    actions,
                    priors: eval.priors,
                },
            );
            break (eval.value, true);
        };

        let mut res = DescentResult::Value(value);
        for (key, m) in path.into_iter().rev() {
            res = res.negated();
            let node = self.table.get_mut(&key).expect("path node in table");
            update_statistics(&mut node.counters, m, res);
        }
        Ok(Leaf::Reached { evaluated })
    }

    /// Searches until the evaluation budget is spent and the next descent
    /// would need another evaluation, or until `max_descents` consecutive
    /// descents ran without evaluating anything.
    pub fn run(&mut self, root: &G) -> Result<SearchOutcome, SearchError> {
        if root.is_terminal() {
            return Err(SearchError::TerminalRoot);
        }
        self.table.clear();
        self.edges.clear();
        self.transpositions = 0;
        self.stats = SearchStats::default();
        let budget = self.cfg.budget() as u64;
        let mut idle = 0;
        loop {
            let may_evaluate = self.stats.forwards < budget;
            match self.descend(root, may_evaluate)? {
                Leaf::OutOfBudget => break,
                Leaf::Reached { evaluated } => {
                    if evaluated {
                        // Only evaluating descents count, as in the DAG search
                        // every descent ends in exactly one forward.
                        self.stats.descents += 1;
                        idle = 0;
                    } else {
                        idle += 1;
                        if idle >= self.cfg.max_descents {
                            break;
                        }
                    }
                }
            }
        }
        let root_node = self.table.get(&root.key()).ok_or(SearchError::RootUnevaluated)?;
        let move_index = stats::most_visited(&root_node.counters, &root_node.priors);
        self.stats.main_nodes = self.table.len();
        self.stats.final_nodes = self.table.len();
        self.stats.tt_entries = self.table.len();
        Ok(SearchOutcome {
            move_index,
            action: root_node.actions[move_index],
            root_visits: root_node.counters.visit_counts(),
            root_means: root_node.counters.moves.iter().map(|m| m.mean()).collect(),
            stats: self.stats.clone(),
        })
    }
}

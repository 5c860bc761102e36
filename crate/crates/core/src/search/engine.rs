//! The batch engine: one transposition table, a main statistics tree, and a
//! shadow copy of the tree used to assemble evaluation batches.
//!
//! The shadow tree is never materialized. Every node keeps a second set of
//! counters stamped with the batch generation; a stale stamp means "equal to
//! the main counters", and the copy happens the first time the node is
//! touched in a generation.

use std::sync::Arc;

use log::warn;

use super::batch::BatchBuffer;
use super::config::SearchConfig;
use super::stats::{
    self, update_statistics, update_statistics_get, Counters, DescentResult,
};
use super::tt::{TranspositionEntry, TranspositionTable};
use super::{SearchError, SearchEvent, SearchOutcome, SearchStats};
use crate::eval::Evaluator;
use crate::game::{GameState, StateKey};

pub type NodeId = usize;

/// Which statistics a descent reads and writes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeKind {
    Main,
    Shadow,
}

/// Budget bookkeeping for the second-move redirect at the root, in
/// evaluations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RootContext {
    pub budget: u64,
    pub used: u64,
}

/// A tree node. `main` holds the real statistics; `batch` the shadow copy,
/// valid only while `stamp` equals the engine generation.
#[derive(Clone, Debug)]
pub struct NodeStats {
    pub key: StateKey,
    pub actions: Vec<usize>,
    pub priors: Arc<[f64]>,
    /// Evaluator value of the node's own position.
    pub value: f64,
    pub children: Vec<Option<NodeId>>,
    pub main: Counters,
    batch: Counters,
    stamp: u64,
    in_main: bool,
    shadow_added: u64,
}

impl NodeStats {
    pub fn in_main(&self) -> bool {
        self.in_main
    }
}

pub struct BatchSearch<'e, G: GameState, E: Evaluator<G> + ?Sized> {
    cfg: SearchConfig,
    evaluator: &'e E,
    tt: TranspositionTable,
    nodes: Vec<NodeStats>,
    root: Option<NodeId>,
    generation: u64,
    penalty_visits: u32,
    buffer: BatchBuffer<G>,
    path: Vec<(NodeId, usize)>,
    stats: SearchStats,
    events: Option<Vec<SearchEvent>>,
}

impl<'e, G: GameState, E: Evaluator<G> + ?Sized> BatchSearch<'e, G, E> {
    pub fn new(cfg: SearchConfig, evaluator: &'e E) -> Self {
        BatchSearch {
            buffer: BatchBuffer::new(cfg.batch_size),
            penalty_visits: cfg.vl,
            cfg,
            evaluator,
            tt: TranspositionTable::new(),
            nodes: Vec::new(),
            root: None,
            generation: 0,
            path: Vec::new(),
            stats: SearchStats::default(),
            events: None,
        }
    }

    /// Keeps a log of evaluator calls and main-tree update loops.
    pub fn record_events(&mut self) {
        self.events = Some(Vec::new());
    }

    pub fn events(&self) -> &[SearchEvent] {
        self.events.as_deref().unwrap_or_default()
    }

    pub fn config(&self) -> &SearchConfig {
        &self.cfg
    }

    pub fn stats(&self) -> &SearchStats {
        &self.stats
    }

    pub fn transpositions(&self) -> &TranspositionTable {
        &self.tt
    }

    pub fn buffer(&self) -> &BatchBuffer<G> {
        &self.buffer
    }

    pub fn nodes(&self) -> &[NodeStats] {
        &self.nodes
    }

    pub fn root(&self) -> Option<&NodeStats> {
        self.root.map(|id| &self.nodes[id])
    }

    /// Main-tree root visit counts, or `None` before the root is evaluated.
    pub fn root_visits(&self) -> Option<Vec<u32>> {
        self.root().filter(|n| n.in_main).map(|n| n.main.visit_counts())
    }

    /// Shadow-tree root counters for the current generation.
    pub fn shadow_root(&mut self) -> Option<&Counters> {
        let id = self.root?;
        Some(&*self.shadow_counters(id))
    }

    pub fn main_nodes(&self) -> usize {
        self.nodes.iter().filter(|n| n.in_main).count()
    }

    pub fn shadow_nodes(&self) -> usize {
        (0..self.nodes.len())
            .filter(|&id| self.present(id, TreeKind::Shadow))
            .count()
    }

    /// Clears table, tree and counters.
    pub fn reset(&mut self) {
        self.tt.clear();
        self.nodes.clear();
        self.root = None;
        self.generation = 0;
        self.buffer.clear();
        self.stats = SearchStats::default();
        if let Some(ev) = &mut self.events {
            ev.clear();
        }
    }

    fn present(&self, id: NodeId, kind: TreeKind) -> bool {
        let n = &self.nodes[id];
        match kind {
            TreeKind::Main => n.in_main,
            TreeKind::Shadow => n.in_main || n.shadow_added == self.generation,
        }
    }

    fn shadow_counters(&mut self, id: NodeId) -> &mut Counters {
        let generation = self.generation;
        let n = &mut self.nodes[id];
        if n.stamp != generation {
            n.batch.clone_from(&n.main);
            n.stamp = generation;
        }
        &mut n.batch
    }

    fn counters(&mut self, id: NodeId, kind: TreeKind) -> &Counters {
        match kind {
            TreeKind::Main => &self.nodes[id].main,
            TreeKind::Shadow => self.shadow_counters(id),
        }
    }

    /// Puts the node for `state` into `kind`, allocating it if needed.
    fn add_node(
        &mut self,
        existing: Option<NodeId>,
        parent: Option<(NodeId, usize)>,
        state: &G,
        entry: &TranspositionEntry,
        kind: TreeKind,
    ) {
        let id = match existing {
            Some(id) => id,
            None => {
                let actions = state.legal_moves();
                let counters = Counters::seeded(entry.value, actions.len());
                self.nodes.push(NodeStats {
                    key: state.key(),
                    children: vec![None; actions.len()],
                    actions,
                    priors: entry.priors.clone(),
                    value: entry.value,
                    batch: counters.clone(),
                    main: counters,
                    stamp: 0,
                    in_main: false,
                    shadow_added: 0,
                });
                let id = self.nodes.len() - 1;
                match parent {
                    Some((p, m)) => self.nodes[p].children[m] = Some(id),
                    None => self.root = Some(id),
                }
                id
            }
        };
        match kind {
            TreeKind::Main => self.nodes[id].in_main = true,
            TreeKind::Shadow => {
                // Fresh in this generation: shadow counters restart from main.
                self.nodes[id].stamp = 0;
                self.shadow_counters(id);
                self.nodes[id].shadow_added = self.generation;
            }
        }
    }

    /// One root-to-leaf descent of the chosen tree, with backup.
    ///
    /// Returns the leaf result from the root player's perspective.
    pub fn descend(
        &mut self,
        root: &G,
        kind: TreeKind,
        root_ctx: Option<RootContext>,
    ) -> Result<DescentResult, SearchError> {
        let max_plies = root.max_plies();
        self.path.clear();
        let mut state = root.clone();
        let mut node = self.root;
        let leaf = loop {
            if state.is_terminal() {
                break DescentResult::Value(state.terminal_value());
            }
            if self.path.len() >= max_plies {
                return Err(SearchError::DepthExceeded { limit: max_plies });
            }
            let id = match node.filter(|&id| self.present(id, kind)) {
                Some(id) => id,
                None => {
                    let key = state.key();
                    if let Some(entry) = self.tt.get(&key).cloned() {
                        let parent = self.path.last().copied();
                        self.add_node(node, parent, &state, &entry, kind);
                        break DescentResult::Value(entry.value);
                    }
                    if kind == TreeKind::Shadow {
                        self.buffer.push(key, state);
                    }
                    break DescentResult::Unknown;
                }
            };
            if kind == TreeKind::Shadow {
                self.shadow_counters(id);
            }
            let n = &self.nodes[id];
            let counters = match kind {
                TreeKind::Main => &n.main,
                TreeKind::Shadow => &n.batch,
            };
            let mut m = stats::select_move(counters, &n.priors, &self.cfg);
            if let Some(ctx) = root_ctx.filter(|_| self.path.is_empty() && self.cfg.second_move) {
                m = stats::second_move_redirect(counters, ctx.budget, ctx.used, m);
            }
            node = n.children[m];
            state = state.play(n.actions[m]);
            self.path.push((id, m));
        };

        let mut res = leaf;
        let penalty = self.cfg.penalty_mode;
        let penalty_visits = self.penalty_visits;
        for i in (0..self.path.len()).rev() {
            let (id, m) = self.path[i];
            res = res.negated();
            match kind {
                TreeKind::Main => update_statistics(&mut self.nodes[id].main, m, res),
                TreeKind::Shadow => {
                    update_statistics_get(self.shadow_counters(id), m, res, penalty, penalty_visits)
                }
            }
        }
        Ok(res)
    }

    /// Starts a new shadow generation and fills the batch buffer.
    pub fn get_batch(&mut self, root: &G, root_ctx: Option<RootContext>) -> Result<(), SearchError> {
        debug_assert!(self.buffer.is_empty());
        self.generation += 1;
        self.penalty_visits = self.cfg.vl;
        let mut descents = 0;
        while !self.buffer.is_full() && descents < self.cfg.max_descents {
            self.descend(root, TreeKind::Shadow, root_ctx)?;
            descents += 1;
        }
        self.stats.batch_descents += descents as u64;
        Ok(())
    }

    /// Stores evaluator results, then descends the main tree until a descent
    /// reaches an unevaluated state. Returns the number of descents that
    /// produced a value.
    pub fn put_batch(
        &mut self,
        root: &G,
        results: Vec<(StateKey, TranspositionEntry)>,
        root_ctx: Option<RootContext>,
    ) -> Result<usize, SearchError> {
        for (key, entry) in results {
            if !self.tt.insert(key, entry) {
                warn!("evaluator returned already-known state {key}");
            }
        }
        let mut counted = 0;
        for _ in 0..self.cfg.max_descents {
            if self.descend(root, TreeKind::Main, root_ctx)?.is_unknown() {
                break;
            }
            counted += 1;
        }
        self.stats.descents += counted as u64;
        if let Some(ev) = &mut self.events {
            ev.push(SearchEvent::PutBatch { descents: counted });
        }
        debug_assert_eq!(self.check_conservation(), Ok(()));
        Ok(counted)
    }

    /// Drains the batch buffer, for callers that evaluate outside the engine.
    pub fn take_batch(&mut self) -> Vec<(StateKey, G)> {
        self.buffer.take()
    }

    /// Sends the buffered states to the evaluator and returns table entries.
    fn evaluate_buffer(&mut self) -> Result<Vec<(StateKey, TranspositionEntry)>, SearchError> {
        let batch = self.buffer.take();
        if batch.is_empty() {
            self.stats.saturated_rounds += 1;
            return Ok(Vec::new());
        }
        debug_assert!(batch.iter().all(|(k, _)| !self.tt.contains(k)));
        let (keys, states): (Vec<StateKey>, Vec<G>) = batch.into_iter().unzip();
        let evals = self.evaluator.evaluate_batch(&states)?;
        if evals.len() != states.len() {
            return Err(SearchError::Evaluator(crate::eval::EvalError::Misaligned {
                expected: states.len(),
                got: evals.len(),
            }));
        }
        self.stats.forwards += states.len() as u64;
        self.stats.batches += 1;
        if let Some(ev) = &mut self.events {
            ev.push(SearchEvent::Forward { states: states.len() });
        }
        keys.into_iter()
            .zip(states.iter().zip(evals))
            .map(|(key, (state, eval))| {
                let eval = eval.validated(state.legal_moves().len())?;
                Ok((
                    key,
                    TranspositionEntry {
                        value: eval.value,
                        priors: Arc::from(eval.priors),
                    },
                ))
            })
            .collect()
    }

    /// One get / evaluate / put round.
    pub fn round(&mut self, root: &G, root_ctx: Option<RootContext>) -> Result<usize, SearchError> {
        self.get_batch(root, root_ctx)?;
        let results = self.evaluate_buffer()?;
        self.put_batch(root, results, root_ctx)
    }

    /// Descends the shadow tree with the last-iteration penalty, without
    /// evaluating anything, until `last_iteration_u` descents came back
    /// Unknown.
    pub fn last_iteration(&mut self, root: &G) -> Result<usize, SearchError> {
        self.generation += 1;
        self.penalty_visits = self.cfg.vll;
        let target = self.cfg.last_iteration_u;
        let cap = target.saturating_mul(self.cfg.max_descents);
        let (mut unknown, mut descents) = (0, 0);
        while unknown < target && descents < cap {
            if self.descend(root, TreeKind::Shadow, None)?.is_unknown() {
                unknown += 1;
            }
            descents += 1;
        }
        self.buffer.clear();
        self.stats.last_iteration_descents += descents as u64;
        Ok(descents)
    }

    /// Full move search from a fresh table and tree.
    pub fn run(&mut self, root: &G) -> Result<SearchOutcome, SearchError> {
        if root.is_terminal() {
            return Err(SearchError::TerminalRoot);
        }
        self.reset();
        let batch = self.cfg.batch_size as u64;
        let budget = self.cfg.budget() as u64;
        for i in 0..self.cfg.num_batches {
            let ctx = self.cfg.second_move.then_some(RootContext {
                budget,
                used: i as u64 * batch,
            });
            self.round(root, ctx)?;
        }
        let root_id = self
            .root
            .filter(|&id| self.nodes[id].in_main)
            .ok_or(SearchError::RootUnevaluated)?;

        let use_shadow = self.cfg.last_iteration_u > 0;
        if use_shadow {
            self.last_iteration(root)?;
        }
        let priors = self.nodes[root_id].priors.clone();
        let kind = if use_shadow { TreeKind::Shadow } else { TreeKind::Main };
        let second_move = self.cfg.second_move;
        let counters = self.counters(root_id, kind).clone();
        let move_index = if second_move {
            stats::second_move_choice(&counters, &priors)
        } else {
            stats::most_visited(&counters, &priors)
        };

        self.stats.main_nodes = self.main_nodes();
        self.stats.final_nodes = if use_shadow {
            self.shadow_nodes()
        } else {
            self.stats.main_nodes
        };
        self.stats.tt_entries = self.tt.len();
        let root_node = &self.nodes[root_id];
        Ok(SearchOutcome {
            move_index,
            action: root_node.actions[move_index],
            root_visits: counters.visit_counts(),
            root_means: counters.moves.iter().map(|m| m.mean()).collect(),
            stats: self.stats.clone(),
        })
    }

    /// Checks `visits = 1 + sum(move visits)` and the matching value
    /// identity on every main-tree node.
    pub fn check_conservation(&self) -> Result<(), String> {
        for (id, n) in self.nodes.iter().enumerate().filter(|(_, n)| n.in_main) {
            let c = &n.main;
            let sum_visits: u32 = c.moves.iter().map(|m| m.visits).sum();
            if c.visits != 1 + sum_visits {
                return Err(format!("node {id}: visits {} != 1 + {sum_visits}", c.visits));
            }
            let sum_values: f64 = c.moves.iter().map(|m| m.value_sum).sum();
            let expected = n.value + sum_values;
            if (c.value_sum - expected).abs() > 1e-9 * (1.0 + c.visits as f64) {
                return Err(format!("node {id}: value_sum {} != {expected}", c.value_sum));
            }
        }
        Ok(())
    }
}

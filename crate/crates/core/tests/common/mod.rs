#![allow(dead_code)]

use std::collections::HashMap;

use batchmcts_core::eval::{EvalError, Evaluation, Evaluator};
use batchmcts_core::game::{GameState, HexPosition, StateKey, SyntheticGame};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deterministic evaluator with uneven priors and values derived from the
/// state key, so searches do not collapse into ties.
pub struct KeyedEvaluator;

pub fn keyed_eval<G: GameState>(s: &G) -> Evaluation {
    let k = s.key();
    let n = s.legal_moves().len();
    let mut rng = ChaCha8Rng::seed_from_u64(k.hi ^ k.lo.rotate_left(7));
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    Evaluation {
        value: rng.gen_range(-0.9..0.9),
        priors: raw.iter().map(|p| p / total).collect(),
    }
}

impl<G: GameState> Evaluator<G> for KeyedEvaluator {
    fn evaluate_batch(&self, states: &[G]) -> Result<Vec<Evaluation>, EvalError> {
        Ok(states.iter().map(keyed_eval).collect())
    }
}

/// Random non-terminal Hex position with `stones` stones.
pub fn random_hex(size: usize, stones: usize, rng: &mut ChaCha8Rng) -> HexPosition {
    loop {
        let mut pos = HexPosition::new(size);
        for _ in 0..stones {
            if pos.is_terminal() {
                break;
            }
            let moves = pos.legal_moves();
            pos = pos.play(*moves.choose(rng).unwrap());
        }
        if !pos.is_terminal() {
            return pos;
        }
    }
}

pub fn random_synthetic(b: usize, d: usize, prefix: usize, rng: &mut ChaCha8Rng) -> SyntheticGame {
    let mut g = SyntheticGame::new(b, d, rng.gen());
    for _ in 0..prefix {
        g = g.play(rng.gen_range(0..b));
    }
    g
}

/// Textbook sequential PUCT on an explicit tree keyed by move path, with
/// evaluations cached by position so a transposed leaf costs nothing.
pub struct PlainPuct {
    pub c: f64,
    nodes: HashMap<Vec<usize>, Node>,
    cache: HashMap<StateKey, Evaluation>,
}

struct Node {
    priors: Vec<f64>,
    n: u32,
    w: f64,
    child_n: Vec<u32>,
    child_w: Vec<f64>,
}

impl PlainPuct {
    pub fn new(c: f64) -> Self {
        PlainPuct { c, nodes: HashMap::new(), cache: HashMap::new() }
    }

    /// Root visit counts after spending `budget` evaluations, stopping at
    /// the first descent that would need one more.
    pub fn root_visits<G: GameState>(
        &mut self,
        root: &G,
        budget: usize,
        eval: impl Fn(&G) -> Evaluation,
        max_descents: usize,
    ) -> Vec<u32> {
        self.nodes.clear();
        self.cache.clear();
        let mut used = 0;
        let mut idle = 0;
        loop {
            // Walk down to a leaf.
            let mut path: Vec<(Vec<usize>, usize)> = Vec::new();
            let mut state = root.clone();
            let mut moves = Vec::new();
            let leaf_value = loop {
                if state.is_terminal() {
                    break Some(state.terminal_value());
                }
                let Some(node) = self.nodes.get(&moves) else {
                    break None;
                };
                let m = self.pick(node);
                path.push((moves.clone(), m));
                moves.push(m);
                state = state.play(state.legal_moves()[m]);
            };
            let v = match leaf_value {
                Some(v) => {
                    idle += 1;
                    if idle > max_descents {
                        break;
                    }
                    v
                }
                None => {
                    let e = match self.cache.get(&state.key()) {
                        Some(e) => {
                            idle += 1;
                            if idle > max_descents {
                                break;
                            }
                            e.clone()
                        }
                        None => {
                            if used == budget {
                                break;
                            }
                            used += 1;
                            idle = 0;
                            let e = eval(&state);
                            self.cache.insert(state.key(), e.clone());
                            e
                        }
                    };
                    let k = e.priors.len();
                    self.nodes.insert(
                        moves.clone(),
                        Node { priors: e.priors, n: 1, w: e.value, child_n: vec![0; k], child_w: vec![0.0; k] },
                    );
                    e.value
                }
            };
            let mut v = v;
            for (key, m) in path.into_iter().rev() {
                v = -v;
                let node = self.nodes.get_mut(&key).unwrap();
                node.n += 1;
                node.w += v;
                node.child_n[m] += 1;
                node.child_w[m] += v;
            }
        }
        self.nodes.get(&Vec::new()).map(|n| n.child_n.clone()).unwrap_or_default()
    }

    fn pick(&self, node: &Node) -> usize {
        let fpu = node.w / node.n as f64;
        let sqrt_n = (node.n as f64 + 1.0).sqrt();
        let mut best = (f64::NEG_INFINITY, 0);
        for m in 0..node.priors.len() {
            let q = if node.child_n[m] > 0 { node.child_w[m] / node.child_n[m] as f64 } else { fpu };
            let u = q + self.c * node.priors[m] * sqrt_n / (1.0 + node.child_n[m] as f64);
            if u > best.0 {
                best = (u, m);
            }
        }
        best.1
    }
}

/// Negamax value of every root move, from the root player's side.
pub fn negamax_children<G: GameState>(root: &G) -> Vec<f64> {
    fn value<G: GameState>(s: &G) -> f64 {
        if s.is_terminal() {
            return s.terminal_value();
        }
        s.legal_moves().into_iter().map(|a| -value(&s.play(a))).fold(f64::NEG_INFINITY, f64::max)
    }
    root.legal_moves().into_iter().map(|a| -value(&root.play(a))).collect()
}

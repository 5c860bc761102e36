use std::collections::VecDeque;

use super::{EvalError, Evaluation, Evaluator};
use crate::game::{GameState, HexPosition, Player};
use crate::par::{self, Parallelism};

/// Fewest empty cells `player` must still fill to connect their two edges,
/// or `None` if the opponent has cut every route.
///
/// 0-1 breadth-first search: own stones cost 0, empty cells cost 1,
/// opponent stones are walls.
pub fn connection_distance(pos: &HexPosition, player: Player) -> Option<u32> {
    let size = pos.size();
    let cost = |cell: usize| match pos.cell(cell) {
        None => Some(1),
        Some(p) if p == player => Some(0),
        Some(_) => None,
    };
    let is_start = |cell: usize| match player {
        Player::First => cell / size == 0,
        Player::Second => cell % size == 0,
    };
    let is_goal = |cell: usize| match player {
        Player::First => cell / size == size - 1,
        Player::Second => cell % size == size - 1,
    };

    let mut dist = vec![u32::MAX; size * size];
    let mut queue = VecDeque::new();
    for cell in (0..size * size).filter(|&c| is_start(c)) {
        if let Some(w) = cost(cell) {
            dist[cell] = w;
            if w == 0 {
                queue.push_front(cell);
            } else {
                queue.push_back(cell);
            }
        }
    }
    let mut best = None::<u32>;
    while let Some(cell) = queue.pop_front() {
        let d = dist[cell];
        if best.is_some_and(|b| d >= b) {
            continue;
        }
        if is_goal(cell) {
            best = Some(d);
            continue;
        }
        for &n in pos.neighbors(cell) {
            let Some(w) = cost(n) else { continue };
            if d + w < dist[n] {
                dist[n] = d + w;
                if w == 0 {
                    queue.push_front(n);
                } else {
                    queue.push_back(n);
                }
            }
        }
    }
    best
}

/// `clamp((d_opponent - d_self) / N, -1, 1)` from the side to move.
pub fn hex_heuristic_value(pos: &HexPosition) -> f64 {
    let size = pos.size();
    let blocked = (size * size) as f64;
    let me = pos.to_move();
    let d_self = connection_distance(pos, me).map_or(blocked, f64::from);
    let d_opp = connection_distance(pos, me.opponent()).map_or(blocked, f64::from);
    ((d_opp - d_self) / size as f64).clamp(-1.0, 1.0)
}

/// Normalized cell scores: `1 + adjacent own stones + centrality`, where
/// centrality is `(N - 1 - chebyshev_distance_to_center) / N`.
pub fn hex_heuristic_priors(pos: &HexPosition) -> Vec<f64> {
    let size = pos.size();
    let me = pos.to_move();
    let center = (size as f64 - 1.0) / 2.0;
    let scores: Vec<f64> = pos
        .legal_moves()
        .into_iter()
        .map(|cell| {
            let own = pos
                .neighbors(cell)
                .iter()
                .filter(|&&n| pos.cell(n) == Some(me))
                .count() as f64;
            let (r, c) = ((cell / size) as f64, (cell % size) as f64);
            let cheb = (r - center).abs().max((c - center).abs());
            1.0 + own + (size as f64 - 1.0 - cheb) / size as f64
        })
        .collect();
    let total: f64 = scores.iter().sum();
    scores.into_iter().map(|s| s / total).collect()
}

/// Deterministic Hex evaluator built from shortest connection distances.
#[derive(Clone, Copy, Debug, Default)]
pub struct HexHeuristic {
    pub parallelism: Parallelism,
}

impl HexHeuristic {
    pub fn new(parallelism: Parallelism) -> Self {
        HexHeuristic { parallelism }
    }

    pub fn evaluate(&self, pos: &HexPosition) -> Evaluation {
        Evaluation {
            value: hex_heuristic_value(pos),
            priors: hex_heuristic_priors(pos),
        }
    }
}

impl Evaluator<HexPosition> for HexHeuristic {
    fn evaluate_batch(&self, states: &[HexPosition]) -> Result<Vec<Evaluation>, EvalError> {
        Ok(par::map_slice(self.parallelism, states, |s| self.evaluate(s)))
    }
}

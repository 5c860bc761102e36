//! Per-node PUCT statistics and the pure update and selection rules.

use super::config::{FpuMode, PenaltyMode, SearchConfig};

/// Outcome of one descent, from the side to move at the receiving node.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DescentResult {
    Unknown,
    Value(f64),
}

impl DescentResult {
    pub fn negated(self) -> Self {
        match self {
            DescentResult::Unknown => DescentResult::Unknown,
            DescentResult::Value(v) => DescentResult::Value(-v),
        }
    }

    pub fn is_unknown(self) -> bool {
        matches!(self, DescentResult::Unknown)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MoveStats {
    pub visits: u32,
    pub value_sum: f64,
}

impl MoveStats {
    pub fn mean(&self) -> Option<f64> {
        (self.visits > 0).then(|| self.value_sum / self.visits as f64)
    }
}

/// Visit and value counters of one node and of each of its moves.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Counters {
    pub visits: u32,
    pub value_sum: f64,
    pub moves: Vec<MoveStats>,
}

impl Counters {
    /// A fresh node: its own evaluation counts as the first visit.
    pub fn seeded(value: f64, num_moves: usize) -> Self {
        Counters {
            visits: 1,
            value_sum: value,
            moves: vec![MoveStats::default(); num_moves],
        }
    }

    pub fn mean(&self) -> f64 {
        self.value_sum / self.visits as f64
    }

    pub fn visit_counts(&self) -> Vec<u32> {
        self.moves.iter().map(|m| m.visits).collect()
    }
}

pub fn fpu_value(node: &Counters, mode: FpuMode) -> f64 {
    match mode {
        FpuMode::Constant(k) => k,
        FpuMode::Mu => node.mean(),
        FpuMode::BestMean => node
            .moves
            .iter()
            .filter_map(MoveStats::mean)
            .fold(None, |best: Option<f64>, m| Some(best.map_or(m, |b| b.max(m))))
            .unwrap_or_else(|| node.mean()),
    }
}

pub fn bandit_score(node: &Counters, priors: &[f64], m: usize, fpu: f64, c: f64, plus_one: bool) -> f64 {
    let mv = &node.moves[m];
    let mu = if mv.visits > 0 {
        mv.value_sum / mv.visits as f64
    } else {
        fpu
    };
    let parent = node.visits as f64 + if plus_one { 1.0 } else { 0.0 };
    mu + c * priors[m] * parent.sqrt() / (1.0 + mv.visits as f64)
}

/// Bandit argmax; the first maximal move wins ties.
pub fn select_move(node: &Counters, priors: &[f64], cfg: &SearchConfig) -> usize {
    let fpu = fpu_value(node, cfg.fpu_mode);
    let mut best = 0;
    let mut best_score = f64::NEG_INFINITY;
    for m in 0..node.moves.len() {
        let score = bandit_score(node, priors, m, fpu, cfg.c, cfg.plus_one_under_sqrt);
        if score > best_score {
            best_score = score;
            best = m;
        }
    }
    best
}

/// Main-tree backup: only real evaluations are recorded.
pub fn update_statistics(node: &mut Counters, m: usize, res: DescentResult) {
    if let DescentResult::Value(v) = res {
        add_value(node, m, v);
    }
}

/// Shadow-tree backup. Unknown results are charged `penalty_visits`
/// phantom visits, carrying the move's current mean under Virtual Mean.
pub fn update_statistics_get(
    node: &mut Counters,
    m: usize,
    res: DescentResult,
    penalty: PenaltyMode,
    penalty_visits: u32,
) {
    match res {
        DescentResult::Value(v) => add_value(node, m, v),
        DescentResult::Unknown => {
            let mean = node.moves[m].mean().unwrap_or_else(|| node.mean());
            let k = penalty_visits;
            node.moves[m].visits += k;
            node.visits += k;
            if penalty == PenaltyMode::VirtualMean {
                node.moves[m].value_sum += k as f64 * mean;
                node.value_sum += k as f64 * mean;
            }
        }
    }
}

fn add_value(node: &mut Counters, m: usize, v: f64) {
    node.moves[m].visits += 1;
    node.moves[m].value_sum += v;
    node.visits += 1;
    node.value_sum += v;
}

/// Indices of the most and second most visited moves; the lower index wins
/// ties.
pub fn top_two_by_visits(node: &Counters) -> (usize, Option<usize>) {
    let mut first = 0;
    for (i, mv) in node.moves.iter().enumerate() {
        if mv.visits > node.moves[first].visits {
            first = i;
        }
    }
    let mut second = None::<usize>;
    for (i, mv) in node.moves.iter().enumerate() {
        if i == first {
            continue;
        }
        if second.is_none_or(|s| mv.visits > node.moves[s].visits) {
            second = Some(i);
        }
    }
    (first, second)
}

/// Redirects root selection to the runner-up once the leader can no longer
/// be overtaken with the remaining budget.
pub fn second_move_redirect(root: &Counters, budget: u64, used: u64, selected: usize) -> usize {
    let (first, Some(second)) = top_two_by_visits(root) else {
        return selected;
    };
    let n1 = root.moves[first].visits as u64;
    let n2 = root.moves[second].visits as u64;
    if n1 >= n2 + budget.saturating_sub(used) {
        second
    } else {
        selected
    }
}

/// Most visited move, breaking visit ties by the higher prior and then the
/// lower index.
pub fn most_visited(node: &Counters, priors: &[f64]) -> usize {
    let mut best = 0;
    for m in 1..node.moves.len() {
        let (v, bv) = (node.moves[m].visits, node.moves[best].visits);
        if v > bv || (v == bv && priors[m] > priors[best]) {
            best = m;
        }
    }
    best
}

/// Final choice of the second-move heuristic: between the two most visited
/// moves, the one with the strictly higher mean, else the most visited.
pub fn second_move_choice(node: &Counters, priors: &[f64]) -> usize {
    let best = most_visited(node, priors);
    let mut second = None::<usize>;
    for m in 0..node.moves.len() {
        if m == best {
            continue;
        }
        let better = second.is_none_or(|s| {
            let (v, sv) = (node.moves[m].visits, node.moves[s].visits);
            v > sv || (v == sv && priors[m] > priors[s])
        });
        if better {
            second = Some(m);
        }
    }
    let Some(second) = second else { return best };
    match (node.moves[best].mean(), node.moves[second].mean()) {
        (Some(mu), Some(mu1)) if mu1 > mu => second,
        _ => best,
    }
}

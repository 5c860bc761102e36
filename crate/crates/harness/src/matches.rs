use batchmcts_core::eval::Evaluator;
use batchmcts_core::game::{GameState, HexPosition, Player};
use batchmcts_core::par::map_range;
use batchmcts_core::search::{search, SearchStats};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::spec::MatchSpec;
use crate::HarnessError;

/// Per-engine means over every move the engine searched.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EngineAggregate {
    pub label: String,
    pub moves: u64,
    /// Nodes of the tree each final move was read from.
    pub mean_nodes: f64,
    pub inferences_per_batch: f64,
    pub descents_per_forward: f64,
    /// Simulated evaluator time under the match latency model.
    pub mean_move_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchReport {
    pub game: String,
    pub num_games: usize,
    pub wins_a: usize,
    pub wins_b: usize,
    pub draws: usize,
    pub winrate_a: f64,
    pub stderr: f64,
    pub vl: u32,
    pub num_batches: usize,
    pub batch_size: usize,
    pub engine_a: EngineAggregate,
    pub engine_b: EngineAggregate,
}

#[derive(Clone, Copy, Debug, Default)]
struct Totals {
    moves: u64,
    nodes: u64,
    forwards: u64,
    batches: u64,
    descents: u64,
    move_ms: f64,
}

impl Totals {
    fn add_search(&mut self, s: &SearchStats, ms: f64) {
        self.moves += 1;
        self.nodes += s.final_nodes as u64;
        self.forwards += s.forwards;
        self.batches += s.batches;
        self.descents += s.descents;
        self.move_ms += ms;
    }

    fn merge(&mut self, o: &Totals) {
        self.moves += o.moves;
        self.nodes += o.nodes;
        self.forwards += o.forwards;
        self.batches += o.batches;
        self.descents += o.descents;
        self.move_ms += o.move_ms;
    }

    fn aggregate(&self, label: String) -> EngineAggregate {
        let per = |x: f64, n: u64| if n == 0 { 0.0 } else { x / n as f64 };
        EngineAggregate {
            label,
            moves: self.moves,
            mean_nodes: per(self.nodes as f64, self.moves),
            inferences_per_batch: per(self.forwards as f64, self.batches),
            descents_per_forward: per(self.descents as f64, self.forwards),
            mean_move_ms: per(self.move_ms, self.moves),
        }
    }
}

struct GameRecord {
    /// Index of the winning engine: 0 for A, 1 for B.
    winner: Option<usize>,
    totals: [Totals; 2],
}

/// Random source for the opening of game `game`; both games of a
/// color-swapped pair get the same stream.
pub fn opening_rng(seed: u64, game: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((game / 2) as u64);
    rng
}

/// Position after the random opening plies of game `game`.
pub fn opening(spec: &MatchSpec, game: usize) -> HexPosition {
    let mut rng = opening_rng(spec.seed, game);
    let mut pos = spec.game.initial();
    for _ in 0..spec.opening_plies {
        if pos.is_terminal() {
            break;
        }
        let moves = pos.legal_moves();
        pos = pos.play(*moves.choose(&mut rng).expect("non-terminal position has moves"));
    }
    pos
}

fn play_game(
    spec: &MatchSpec,
    evaluators: [&dyn Evaluator<HexPosition>; 2],
    game: usize,
) -> Result<GameRecord, HarnessError> {
    let engines = [&spec.engine_a, &spec.engine_b];
    // Engine A moves first in even games.
    let first = game % 2;
    let mut totals = [Totals::default(); 2];
    let mut pos = opening(spec, game);
    while !pos.is_terminal() {
        let engine = match pos.to_move() {
            Player::First => first,
            Player::Second => 1 - first,
        };
        let out = search(&pos, &engines[engine].search, evaluators[engine]).map_err(|source| {
            HarnessError::Engine {
                engine: engines[engine].label(),
                game,
                move_number: pos.history().len() + 1,
                source,
            }
        })?;
        let ms = spec.latency.total_ms(out.stats.batches, out.stats.forwards);
        totals[engine].add_search(&out.stats, ms);
        pos = pos.play(out.action);
    }
    let winner = pos.winner().map(|p| match p {
        Player::First => first,
        Player::Second => 1 - first,
    });
    Ok(GameRecord { winner, totals })
}

/// Plays `spec.num_games` games, engines swapping colors between the two
/// games of each opening pair.
pub fn run_match(spec: &MatchSpec) -> Result<MatchReport, HarnessError> {
    spec.validate()?;
    let eval_a = spec.engine_a.evaluator.build(&spec.game)?;
    let eval_b = spec.engine_b.evaluator.build(&spec.game)?;
    let evaluators: [&dyn Evaluator<HexPosition>; 2] = [&*eval_a, &*eval_b];
    let records = map_range(spec.parallelism, spec.num_games, |g| play_game(spec, evaluators, g));

    let mut wins = [0usize; 2];
    let mut draws = 0;
    let mut totals = [Totals::default(); 2];
    for record in records {
        let record = record?;
        match record.winner {
            Some(w) => wins[w] += 1,
            None => draws += 1,
        }
        totals[0].merge(&record.totals[0]);
        totals[1].merge(&record.totals[1]);
    }
    let n = spec.num_games as f64;
    let winrate = (wins[0] as f64 + 0.5 * draws as f64) / n;
    let cfg = &spec.engine_a.search.effective();
    Ok(MatchReport {
        game: spec.game.name(),
        num_games: spec.num_games,
        wins_a: wins[0],
        wins_b: wins[1],
        draws,
        winrate_a: winrate,
        stderr: standard_error(winrate, spec.num_games),
        vl: cfg.vl,
        num_batches: cfg.num_batches,
        batch_size: cfg.batch_size,
        engine_a: totals[0].aggregate(spec.engine_a.label()),
        engine_b: totals[1].aggregate(spec.engine_b.label()),
    })
}

/// `sqrt(w (1 - w) / n)`.
pub fn standard_error(winrate: f64, games: usize) -> f64 {
    (winrate * (1.0 - winrate) / games as f64).sqrt()
}

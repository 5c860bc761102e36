mod common;

use batchmcts_core::eval::{Evaluator, HexHeuristic};
use batchmcts_core::game::GameState;
use batchmcts_core::par::Parallelism;
use batchmcts_core::search::{Baseline, BatchSearch, SearchConfig};
use common::{keyed_eval, random_hex, random_synthetic, KeyedEvaluator, PlainPuct};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BUDGETS: [usize; 3] = [16, 64, 256];
const NO_CAP: usize = 1_000_000;

fn batch_one(budget: usize, c: f64) -> SearchConfig {
    SearchConfig {
        c,
        batch_size: 1,
        num_batches: budget,
        max_descents: NO_CAP,
        baseline: Baseline::BatchTree,
        ..SearchConfig::default()
    }
}

fn engine_visits<G: GameState, E: Evaluator<G>>(root: &G, cfg: SearchConfig, eval: &E) -> Vec<u32> {
    BatchSearch::new(cfg, eval).run(root).unwrap().root_visits
}

#[test]
fn hex_positions_match_plain_puct() {
    let heuristic = HexHeuristic::new(Parallelism::Sequential);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..60 {
        let stones = rng.gen_range(0..=6);
        let pos = random_hex(5, stones, &mut rng);
        for budget in BUDGETS {
            let c = [0.2, 0.5, 1.5][i % 3];
            let got = engine_visits(&pos, batch_one(budget, c), &heuristic);
            let want = PlainPuct::new(c).root_visits(&pos, budget, |s| heuristic.evaluate(s), NO_CAP);
            assert_eq!(got, want, "position {i} ({}) budget {budget}", pos.history_notation());
        }
    }
}

#[test]
fn hex_positions_match_with_keyed_priors() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for i in 0..20 {
        let pos = random_hex(5, rng.gen_range(0..=6), &mut rng);
        for budget in BUDGETS {
            let got = engine_visits(&pos, batch_one(budget, 0.5), &KeyedEvaluator);
            let want = PlainPuct::new(0.5).root_visits(&pos, budget, keyed_eval, NO_CAP);
            assert_eq!(got, want, "position {i} budget {budget}");
        }
    }
}

#[test]
fn synthetic_positions_match_plain_puct() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..50 {
        let prefix = rng.gen_range(0..=2);
        let g = random_synthetic(3, 9, prefix, &mut rng);
        for budget in BUDGETS {
            let got = engine_visits(&g, batch_one(budget, 0.5), &KeyedEvaluator);
            let want = PlainPuct::new(0.5).root_visits(&g, budget, keyed_eval, NO_CAP);
            assert_eq!(got, want, "seed {} prefix {:?} budget {budget}", g.seed(), g.path());
        }
    }
}

#[test]
fn sequential_baseline_is_batch_of_one() {
    let heuristic = HexHeuristic::new(Parallelism::Sequential);
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..10 {
        let pos = random_hex(5, rng.gen_range(0..=4), &mut rng);
        let seq = SearchConfig { max_descents: NO_CAP, ..SearchConfig::sequential(64) };
        let a = batchmcts_core::search(&pos, &seq, &heuristic).unwrap();
        let b = engine_visits(&pos, batch_one(64, 0.2), &heuristic);
        assert_eq!(a.root_visits, b);
    }
}

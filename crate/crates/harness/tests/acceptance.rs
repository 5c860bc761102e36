//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use batchmcts_core::eval::HexHeuristic;
use batchmcts_core::game::{GameState, HexPosition, SyntheticGame};
use batchmcts_core::par::Parallelism;
use batchmcts_core::search::stats::{update_statistics_get, Counters, MoveStats};
use batchmcts_core::search::{search, BatchSearch, DescentResult, PenaltyMode, SearchConfig};
use batchmcts_harness::oracle::synthetic_oracle;
use batchmcts_harness::{run_match, MatchReport, MatchSpec};
use common::{keyed_eval, negamax_children, random_hex, random_synthetic, KeyedEvaluator, PlainPuct};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn check(name: &str, limit: Duration, f: impl FnOnce() -> Verdict) -> bool {
    let start = Instant::now();
    let v = f();
    let elapsed = start.elapsed();
    let in_time = elapsed <= limit;
    let pass = v.pass && in_time;
    println!(
        "{} {name}: {} [{:.1}s, limit {}s]",
        if pass { "PASS" } else { "FAIL" },
        v.detail,
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    pass
}

fn heuristic() -> HexHeuristic {
    HexHeuristic::new(Parallelism::Sequential)
}

fn sequential_equivalence() -> Verdict {
    let h = heuristic();
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let (mut cases, mut mismatches) = (0, 0);
    for i in 0..100 {
        for budget in [16, 64, 256] {
            let cfg = SearchConfig { batch_size: 1, num_batches: budget, max_descents: 1_000_000, ..SearchConfig::default() };
            let equal = if i % 2 == 0 {
                let pos = random_hex(5, rng.gen_range(0..=6), &mut rng);
                let got = search(&pos, &cfg, &h).unwrap().root_visits;
                got == PlainPuct::new(cfg.c).root_visits(&pos, budget, |s| h.evaluate(s), cfg.max_descents)
            } else {
                let g = random_synthetic(3, 9, rng.gen_range(0..=2), &mut rng);
                let got = search(&g, &cfg, &KeyedEvaluator).unwrap().root_visits;
                got == PlainPuct::new(cfg.c).root_visits(&g, budget, keyed_eval, cfg.max_descents)
            };
            cases += 1;
            mismatches += usize::from(!equal);
        }
    }
    Verdict { pass: mismatches == 0, detail: format!("{mismatches} mismatches in {cases} searches (100 positions)") }
}

fn minimax() -> Verdict {
    let (mut agree, mut bad) = (0, Vec::new());
    for seed in 0..100 {
        let r = synthetic_oracle(3, 4, seed, 2016).unwrap();
        let values = negamax_children(&SyntheticGame::new(3, 4, seed));
        let best = (0..values.len()).fold(0, |b, m| if values[m] > values[b] { m } else { b });
        if r.engine_move == best {
            agree += 1;
            continue;
        }
        let mut sorted = values.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        if sorted[0] - sorted[1] >= 0.05 {
            bad.push(seed);
        }
    }
    Verdict {
        pass: agree >= 95 && bad.is_empty(),
        detail: format!("{agree}/100 agree, clear-gap failures {bad:?}"),
    }
}

fn virtual_mean_invariance() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    let mut loss_violations = 0;
    for _ in 0..100_000 {
        let k = rng.gen_range(1..6);
        let moves: Vec<MoveStats> = (0..k)
            .map(|_| {
                let n = rng.gen_range(0..200);
                MoveStats { visits: n, value_sum: n as f64 * rng.gen_range(-1.0..1.0) }
            })
            .collect();
        let node = Counters {
            visits: 1 + moves.iter().map(|m| m.visits).sum::<u32>(),
            value_sum: rng.gen_range(-50.0..50.0),
            moves,
        };
        let m = rng.gen_range(0..k);
        let vl = rng.gen_range(1..6);
        if rng.gen_bool(0.5) {
            let mut n = node.clone();
            update_statistics_get(&mut n, m, DescentResult::Unknown, PenaltyMode::VirtualMean, vl);
            if let Some(mu) = node.moves[m].mean() {
                worst = worst.max((n.moves[m].mean().unwrap() - mu).abs());
            }
        } else {
            let mut n = node.clone();
            update_statistics_get(&mut n, m, DescentResult::Unknown, PenaltyMode::VirtualLoss, vl);
            if n.moves[m].value_sum != node.moves[m].value_sum || n.value_sum != node.value_sum {
                loss_violations += 1;
            }
        }
    }
    Verdict {
        pass: worst <= 1e-12 && loss_violations == 0,
        detail: format!("max mean drift {worst:e}, virtual-loss sum changes {loss_violations}"),
    }
}

fn conservation() -> Verdict {
    let h = heuristic();
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let (mut moves, mut checks, mut failures) = (0, 0, 0);
    while moves < 1000 {
        let mut pos = HexPosition::new(*[5, 7].choose(&mut rng).unwrap());
        while !pos.is_terminal() && moves < 1000 {
            let batch_size = *[1, 4, 8, 32].choose(&mut rng).unwrap();
            let cfg = SearchConfig {
                c: rng.gen_range(0.1..1.5),
                penalty_mode: *[PenaltyMode::VirtualMean, PenaltyMode::VirtualLoss].choose(&mut rng).unwrap(),
                vl: rng.gen_range(1..4),
                batch_size,
                num_batches: rng.gen_range(1..12),
                ..SearchConfig::default()
            };
            let mut engine = BatchSearch::new(cfg.clone(), &h);
            for _ in 0..cfg.num_batches {
                engine.round(&pos, None).unwrap();
                checks += 1;
                failures += usize::from(engine.check_conservation().is_err());
            }
            let out = search(&pos, &cfg, &h).unwrap();
            pos = pos.play(out.action);
            moves += 1;
        }
    }
    Verdict { pass: failures == 0, detail: format!("{failures} violations over {checks} put_batch calls, {moves} moves") }
}

fn reuse_ratio() -> Verdict {
    let h = heuristic();
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut positions = vec![HexPosition::new(7)];
    while positions.len() < 8 {
        positions.push(random_hex(7, 2, &mut rng));
    }
    let ratio = |budget: usize| {
        let (mut d, mut f) = (0, 0);
        for pos in &positions {
            let out = search(pos, &SearchConfig::sequential(budget), &h).unwrap();
            d += out.stats.descents;
            f += out.stats.forwards;
        }
        d as f64 / f as f64
    };
    let (small, large) = (ratio(256), ratio(4096));
    Verdict {
        pass: small > 1.0 && large > small,
        detail: format!("descents/forwards {small:.4} at 256, {large:.4} at 4096"),
    }
}

fn play(config: &str) -> MatchReport {
    run_match(&MatchSpec::from_json(config).unwrap()).unwrap()
}

fn winrate_at_least(r: &MatchReport, min: f64) -> Verdict {
    Verdict {
        pass: r.winrate_a >= min,
        detail: format!(
            "{} vs {}: winrate {:.4} (stderr {:.4}, need >= {min})",
            r.engine_a.label, r.engine_b.label, r.winrate_a, r.stderr
        ),
    }
}

fn mu_fpu() -> Verdict {
    let r = play(
        r#"{"game": {"hex": {"size": 7}}, "num_games": 400, "seed": 1,
            "engine_a": {"label": "mu fpu", "search": {"c": 0.2, "batch_size": 1, "num_batches": 128, "baseline": "sequential_tree", "fpu_mode": "mu"}},
            "engine_b": {"label": "constant fpu", "search": {"c": 0.2, "batch_size": 1, "num_batches": 128, "baseline": "sequential_tree", "fpu_mode": {"constant": 0.0}}}}"#,
    );
    winrate_at_least(&r, 0.55)
}

fn virtual_mean() -> Verdict {
    let r = play(
        r#"{"game": {"hex": {"size": 7}}, "num_games": 400, "seed": 7,
            "engine_a": {"label": "virtual mean", "search": {"c": 0.2, "penalty_mode": "virtual_mean", "vl": 1}},
            "engine_b": {"label": "virtual loss", "search": {"c": 0.2, "penalty_mode": "virtual_loss", "vl": 2}}}"#,
    );
    winrate_at_least(&r, 0.55)
}

fn second_move() -> Verdict {
    let r = play(
        r#"{"game": {"hex": {"size": 7}}, "num_games": 400, "seed": 5,
            "engine_a": {"label": "second move", "search": {"c": 0.2, "batch_size": 1, "num_batches": 64, "baseline": "sequential_tree", "second_move": true}},
            "engine_b": {"label": "sequential", "search": {"c": 0.2, "batch_size": 1, "num_batches": 64, "baseline": "sequential_tree"}}}"#,
    );
    winrate_at_least(&r, 0.52)
}

fn last_iteration() -> Verdict {
    let r = play(
        r#"{"game": {"hex": {"size": 7}}, "num_games": 400, "seed": 4,
            "engine_a": {"label": "last iteration", "search": {"c": 0.2, "last_iteration_u": 40, "vll": 1}},
            "engine_b": {"label": "no last iteration", "search": {"c": 0.2}}}"#,
    );
    let mut v = winrate_at_least(&r, 0.50);
    v.pass &= r.engine_a.mean_nodes > r.engine_b.mean_nodes;
    v.detail.push_str(&format!("; nodes {:.2} vs {:.2}", r.engine_a.mean_nodes, r.engine_b.mean_nodes));
    v
}

fn throughput() -> Verdict {
    let out = Command::new(env!("CARGO_BIN_EXE_batchmcts"))
        .args(["throughput", "--a", "26", "--c", "0.28", "--sizes", "1,2,4,8,16,32,64,128"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<(usize, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect();
    let monotone = rows.windows(2).all(|w| w[1].1 > w[0].1);
    let at = |s: usize| rows.iter().find(|r| r.0 == s).unwrap().1;
    let ratio = at(32) / at(1);
    Verdict {
        pass: out.status.success() && monotone && (20.0..=30.0).contains(&ratio),
        detail: format!("size 1 {:.2}/s, size 32 {:.2}/s, ratio {ratio:.2}, monotone {monotone}", at(1), at(32)),
    }
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("match.json");
    std::fs::write(
        &cfg,
        r#"{"game": {"hex": {"size": 7}}, "num_games": 40, "seed": 11,
            "engine_a": {"label": "batch", "search": {"batch_size": 8, "num_batches": 8, "last_iteration_u": 5, "second_move": true}},
            "engine_b": {"label": "sequential", "search": {"c": 0.2, "batch_size": 1, "num_batches": 64, "baseline": "sequential_tree"}}}"#,
    )
    .unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_batchmcts"))
            .arg("match")
            .arg("--config")
            .arg(&cfg)
            .arg("--out")
            .arg(&out)
            .output()
            .unwrap()
            .status;
        assert!(status.success());
        std::fs::read(out).unwrap()
    };
    let (a, b) = (run("a.csv"), run("b.csv"));
    Verdict { pass: a == b && !a.is_empty(), detail: format!("{} bytes, identical {}", a.len(), a == b) }
}

fn main() -> ExitCode {
    let min = |m: u64| Duration::from_secs(60 * m);
    let results = [
        check("sequential equivalence", min(1), sequential_equivalence),
        check("minimax oracle", min(2), minimax),
        check("virtual mean invariance", Duration::from_secs(5), virtual_mean_invariance),
        check("conservation", min(1), conservation),
        check("descents per forward grows", min(10), reuse_ratio),
        check("mu fpu vs constant fpu", min(30), mu_fpu),
        check("virtual mean vs virtual loss", min(45), virtual_mean),
        check("second move", min(20), second_move),
        check("last iteration", min(45), last_iteration),
        check("throughput curve", Duration::from_secs(1), throughput),
        check("deterministic match csv", min(5), determinism),
    ];
    let failed = results.iter().filter(|&&p| !p).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

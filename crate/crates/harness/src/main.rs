use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use batchmcts_core::eval::LatencyModel;
use batchmcts_harness::oracle::synthetic_oracle;
use batchmcts_harness::throughput::{render, throughput_table};
use batchmcts_harness::{report_table, run_match, sweep, HarnessError, MatchReport, MatchSpec, TableFormat};
use clap::{Parser, Subcommand, ValueEnum};
use log::info;

#[derive(Parser)]
#[command(name = "batchmcts", version, about = "Batch PUCT match harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Markdown,
}

impl From<Format> for TableFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => TableFormat::Csv,
            Format::Markdown => TableFormat::Markdown,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleGame {
    Synthetic,
}

#[derive(Subcommand)]
enum Command {
    /// Play the match described by a JSON config file
    Match {
        #[arg(long)]
        config: PathBuf,
        /// Also write the table as CSV here
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "markdown")]
        format: Format,
    },
    /// Play one match per value of a search parameter of engine A
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        param: String,
        #[arg(long, value_delimiter = ',')]
        values: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "markdown")]
        format: Format,
    },
    /// Inferences per second of the affine latency model
    Throughput {
        /// Fixed cost per batch, in ms
        #[arg(long)]
        a: f64,
        /// Cost per state, in ms
        #[arg(long)]
        c: f64,
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16,32,64,128")]
        sizes: Vec<usize>,
    },
    /// Compare the engine's move with exhaustive negamax
    Oracle {
        #[arg(long, value_enum)]
        game: OracleGame,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        budget: usize,
    },
}

fn load(path: &PathBuf) -> Result<MatchSpec, HarnessError> {
    let text = fs::read_to_string(path)
        .map_err(|e| HarnessError::Config(format!("cannot read {}: {e}", path.display())))?;
    MatchSpec::from_json(&text)
}

fn emit(reports: &[MatchReport], format: Format, out: Option<&PathBuf>) -> Result<(), HarnessError> {
    if reports.is_empty() {
        return Ok(());
    }
    print!("{}", report_table(reports, format.into()));
    for r in reports {
        for e in [&r.engine_a, &r.engine_b] {
            println!(
                "{}: moves {} nodes {:.2} inference {:.2} descents/forward {:.4} move {:.1} ms",
                e.label, e.moves, e.mean_nodes, e.inferences_per_batch, e.descents_per_forward, e.mean_move_ms
            );
        }
    }
    if let Some(path) = out {
        fs::write(path, report_table(reports, TableFormat::Csv))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, HarnessError> {
    match cli.command {
        Command::Match { config, out, format } => {
            let spec = load(&config)?;
            info!("{} games of {}", spec.num_games, spec.game.name());
            let report = run_match(&spec)?;
            emit(&[report], format, out.as_ref())?;
        }
        Command::Sweep { config, param, values, out, format } => {
            let spec = load(&config)?;
            let reports = sweep(&spec, &param, &values)?;
            emit(&reports, format, out.as_ref())?;
        }
        Command::Throughput { a, c, sizes } => {
            if !(a >= 0.0 && c >= 0.0) || sizes.contains(&0) {
                return Err(HarnessError::Config("latencies must be nonnegative and sizes positive".into()));
            }
            print!("{}", render(&throughput_table(&LatencyModel::new(a, c), &sizes)));
        }
        Command::Oracle { game: OracleGame::Synthetic, b, d, seed, budget } => {
            if b == 0 || d == 0 || budget == 0 {
                return Err(HarnessError::Config("b, d and budget must be positive".into()));
            }
            let report = synthetic_oracle(b, d, seed, budget).map_err(|source| HarnessError::Engine {
                engine: "oracle".into(),
                game: 0,
                move_number: 1,
                source,
            })?;
            println!("engine move {} minimax move {}", report.engine_move, report.minimax_move);
            println!("minimax values {:?}", report.minimax_values);
            if !report.agrees() {
                return Ok(ExitCode::from(4));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

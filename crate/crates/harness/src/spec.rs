use std::time::Duration;

use batchmcts_core::eval::{Evaluator, HexHeuristic, LatencyModel, UniformEvaluator, WireEvaluator};
use batchmcts_core::game::HexPosition;
use batchmcts_core::par::Parallelism;
use batchmcts_core::SearchConfig;
use serde::{Deserialize, Serialize};

use crate::HarnessError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GameSpec {
    Hex { size: usize },
}

impl GameSpec {
    pub fn name(&self) -> String {
        match self {
            GameSpec::Hex { size } => format!("hex{size}"),
        }
    }

    pub fn initial(&self) -> HexPosition {
        match *self {
            GameSpec::Hex { size } => HexPosition::new(size),
        }
    }
}

/// Where leaf evaluations come from.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum EvaluatorSpec {
    Uniform,
    #[default]
    HexHeuristic,
    /// Remote server: `addr` is `host:port`; `command` spawns a process
    /// speaking the protocol on stdio. With neither, the address is read
    /// from `BATCHMCTS_EVAL_ADDR`.
    Wire {
        #[serde(default)]
        addr: Option<String>,
        #[serde(default)]
        command: Option<Vec<String>>,
        #[serde(default = "default_timeout_ms")]
        timeout_ms: u64,
    },
}

fn default_timeout_ms() -> u64 {
    30_000
}

impl EvaluatorSpec {
    pub fn build(&self, game: &GameSpec) -> Result<Box<dyn Evaluator<HexPosition>>, HarnessError> {
        let name = game.name();
        Ok(match self {
            EvaluatorSpec::Uniform => Box::new(UniformEvaluator),
            EvaluatorSpec::HexHeuristic => Box::new(HexHeuristic::new(Parallelism::Sequential)),
            EvaluatorSpec::Wire { addr, command, timeout_ms } => {
                let timeout = Duration::from_millis(*timeout_ms);
                match (addr, command) {
                    (Some(_), Some(_)) => {
                        return Err(HarnessError::Config("wire evaluator takes addr or command, not both".into()))
                    }
                    (Some(addr), None) => Box::new(WireEvaluator::connect(addr, &name, timeout)?),
                    (None, Some(cmd)) => {
                        let (program, args) = cmd
                            .split_first()
                            .ok_or_else(|| HarnessError::Config("empty wire command".into()))?;
                        Box::new(WireEvaluator::spawn(program, args, &name)?)
                    }
                    (None, None) => Box::new(WireEvaluator::connect_from_env(&name, timeout)?),
                }
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EngineSpec {
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default)]
    pub search: SearchConfig,
    #[serde(default)]
    pub evaluator: EvaluatorSpec,
}

impl EngineSpec {
    pub fn label(&self) -> String {
        self.label.clone().unwrap_or_else(|| {
            let s = &self.search;
            format!("{:?} {}x{}", s.baseline, s.num_batches, s.batch_size)
        })
    }
}

fn default_games() -> usize {
    400
}

fn default_opening() -> usize {
    2
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatchSpec {
    pub game: GameSpec,
    pub engine_a: EngineSpec,
    pub engine_b: EngineSpec,
    #[serde(default = "default_games")]
    pub num_games: usize,
    #[serde(default = "default_opening")]
    pub opening_plies: usize,
    #[serde(default)]
    pub seed: u64,
    /// Evaluator cost model behind the reported move times.
    #[serde(default)]
    pub latency: LatencyModel,
    #[serde(default)]
    pub parallelism: Parallelism,
}

impl MatchSpec {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let spec: MatchSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.num_games == 0 || self.num_games % 2 != 0 {
            return Err(HarnessError::Config(format!(
                "num_games must be positive and even, got {}",
                self.num_games
            )));
        }
        let GameSpec::Hex { size } = self.game;
        if !(1..=26).contains(&size) {
            return Err(HarnessError::Config(format!("unsupported hex size {size}")));
        }
        if self.opening_plies >= size * size {
            return Err(HarnessError::Config("opening fills the board".into()));
        }
        self.engine_a.search.validate()?;
        self.engine_b.search.validate()?;
        Ok(())
    }
}

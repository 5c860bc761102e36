//! Abstract two-player game interface and the concrete games used by the
//! engine: Hex (transposing, no draws) and an enumerable synthetic tree.

mod hex;
mod synthetic;
mod union_find;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use hex::{hex_winner, HexPosition, NotationError};
pub use synthetic::SyntheticGame;
pub use union_find::UnionFind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    First,
    Second,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::First => Player::Second,
            Player::Second => Player::First,
        }
    }
}

/// 128-bit position key. Equal keys are treated as equal positions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateKey {
    pub hi: u64,
    pub lo: u64,
}

impl StateKey {
    pub const fn new(hi: u64, lo: u64) -> Self {
        StateKey { hi, lo }
    }
}

impl std::ops::BitXor for StateKey {
    type Output = StateKey;

    fn bitxor(self, rhs: StateKey) -> StateKey {
        StateKey::new(self.hi ^ rhs.hi, self.lo ^ rhs.lo)
    }
}

impl std::ops::BitXorAssign for StateKey {
    fn bitxor_assign(&mut self, rhs: StateKey) {
        self.hi ^= rhs.hi;
        self.lo ^= rhs.lo;
    }
}

impl fmt::Display for StateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}{:016x}", self.hi, self.lo)
    }
}

/// SplitMix64 finalizer.
#[inline]
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A position in a deterministic, alternating two-player game.
///
/// Actions are game-specific identifiers (a cell index for Hex, a branch for
/// the synthetic game). The search works with *move indices*, i.e. positions
/// within [`GameState::legal_moves`], which must therefore be stable for a
/// given position.
pub trait GameState: Clone + Send + Sync + fmt::Debug {
    fn to_move(&self) -> Player;

    fn is_terminal(&self) -> bool;

    /// Exact result from the side-to-move perspective. Panics on a
    /// non-terminal position.
    fn terminal_value(&self) -> f64;

    /// Ordered, duplicate-free legal actions. Panics on a terminal position.
    fn legal_moves(&self) -> Vec<usize>;

    /// Successor position. Panics if `action` is illegal.
    fn play(&self, action: usize) -> Self;

    fn key(&self) -> StateKey;

    /// Upper bound on the number of plies any game can last.
    fn max_plies(&self) -> usize;

    /// Game identifier used on the evaluator wire protocol.
    fn game_name(&self) -> String;

    fn move_notation(&self, action: usize) -> String;

    /// Actions played from the initial position.
    fn history(&self) -> &[usize];

    /// Space-separated move sequence from the initial position.
    fn history_notation(&self) -> String {
        self.history()
            .iter()
            .map(|&a| self.move_notation(a))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

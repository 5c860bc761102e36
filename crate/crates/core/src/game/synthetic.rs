use super::{mix64, GameState, Player, StateKey};

const HI_SALT: u64 = 0x5f3a_9c21_d2e8_0b17;
const LO_SALT: u64 = 0x0a7c_4e19_b35d_62f1;
const LEAF_SALT: u64 = 0x6c8e_9cf5_7093_2bd1;

/// Uniform tree of branching `b` and depth `d` whose leaves carry hashed
/// values in `[-1, 1]`.
///
/// Keys hash the whole move path, so the game never transposes. Leaf values
/// are reported from the side-to-move perspective at the leaf.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntheticGame {
    branching: usize,
    depth: usize,
    seed: u64,
    path: Vec<usize>,
    key: StateKey,
}

impl SyntheticGame {
    pub fn new(branching: usize, depth: usize, seed: u64) -> Self {
        assert!(branching >= 1 && depth >= 1, "degenerate synthetic game");
        SyntheticGame {
            branching,
            depth,
            seed,
            path: Vec::new(),
            key: StateKey::new(mix64(seed ^ HI_SALT), mix64(seed ^ LO_SALT)),
        }
    }

    pub fn branching(&self) -> usize {
        self.branching
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn path(&self) -> &[usize] {
        &self.path
    }

    /// Hashed value of the leaf reached by `path` (must have length `d`).
    pub fn leaf_value(&self) -> f64 {
        let bits = mix64(self.key.hi ^ mix64(self.key.lo ^ LEAF_SALT));
        // 53 uniform bits mapped onto [-1, 1].
        (bits >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    }
}

impl GameState for SyntheticGame {
    fn to_move(&self) -> Player {
        if self.path.len() % 2 == 0 {
            Player::First
        } else {
            Player::Second
        }
    }

    fn is_terminal(&self) -> bool {
        self.path.len() == self.depth
    }

    fn terminal_value(&self) -> f64 {
        assert!(self.is_terminal(), "terminal_value on an internal synthetic node");
        self.leaf_value()
    }

    fn legal_moves(&self) -> Vec<usize> {
        assert!(!self.is_terminal(), "legal_moves on a synthetic leaf");
        (0..self.branching).collect()
    }

    fn play(&self, action: usize) -> Self {
        assert!(
            action < self.branching && !self.is_terminal(),
            "illegal synthetic move {action}"
        );
        let mut next = self.clone();
        let step = (action as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
        next.key = StateKey::new(
            mix64(self.key.hi ^ step),
            mix64(self.key.lo.rotate_left(17) ^ step),
        );
        next.path.push(action);
        next
    }

    fn key(&self) -> StateKey {
        self.key
    }

    fn max_plies(&self) -> usize {
        self.depth
    }

    fn game_name(&self) -> String {
        "synthetic".to_string()
    }

    fn move_notation(&self, action: usize) -> String {
        action.to_string()
    }

    fn history(&self) -> &[usize] {
        &self.path
    }
}

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{GameState, Player, StateKey, UnionFind};

const EMPTY: u8 = 0;
const FIRST: u8 = 1;
const SECOND: u8 = 2;

// Virtual edge nodes appended after the board cells.
const TOP: usize = 0;
const BOTTOM: usize = 1;
const LEFT: usize = 2;
const RIGHT: usize = 3;

const MAX_SIZE: usize = 26;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NotationError {
    #[error("malformed cell `{0}`")]
    Malformed(String),
    #[error("cell `{0}` is off the board")]
    OffBoard(String),
    #[error("cell `{0}` is already occupied or the game is over")]
    Illegal(String),
}

/// Per-size constant data shared by every position of that size.
#[derive(Debug)]
struct HexTables {
    size: usize,
    base: StateKey,
    zobrist: Vec<[StateKey; 2]>,
    neighbors: Vec<Vec<usize>>,
}

impl HexTables {
    fn build(size: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(0x4845_5800 ^ size as u64);
        let mut key = || StateKey::new(rng.gen(), rng.gen());
        let base = key();
        let zobrist = (0..size * size).map(|_| [key(), key()]).collect();
        let neighbors = (0..size * size)
            .map(|cell| neighbors_of(size, cell).collect())
            .collect();
        HexTables {
            size,
            base,
            zobrist,
            neighbors,
        }
    }

    fn shared(size: usize) -> Arc<HexTables> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<HexTables>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let mut cache = cache.lock().expect("hex table cache poisoned");
        cache
            .entry(size)
            .or_insert_with(|| Arc::new(HexTables::build(size)))
            .clone()
    }
}

/// Rhombic board adjacency: each cell touches up to six others.
fn neighbors_of(size: usize, cell: usize) -> impl Iterator<Item = usize> {
    let (r, c) = ((cell / size) as isize, (cell % size) as isize);
    const OFFSETS: [(isize, isize); 6] = [(-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0)];
    let n = size as isize;
    OFFSETS.into_iter().filter_map(move |(dr, dc)| {
        let (nr, nc) = (r + dr, c + dc);
        (nr >= 0 && nr < n && nc >= 0 && nc < n).then_some((nr * n + nc) as usize)
    })
}

fn edge_links(size: usize, cell: usize, stone: u8) -> [Option<usize>; 2] {
    let (r, c) = (cell / size, cell % size);
    let base = size * size;
    match stone {
        FIRST => [
            (r == 0).then_some(base + TOP),
            (r == size - 1).then_some(base + BOTTOM),
        ],
        _ => [
            (c == 0).then_some(base + LEFT),
            (c == size - 1).then_some(base + RIGHT),
        ],
    }
}

fn stone_of(player: Player) -> u8 {
    match player {
        Player::First => FIRST,
        Player::Second => SECOND,
    }
}

/// Hex position on an N×N rhombus. First connects top to bottom, second
/// connects left to right. No swap rule.
#[derive(Clone)]
pub struct HexPosition {
    tables: Arc<HexTables>,
    board: Vec<u8>,
    to_move: Player,
    key: StateKey,
    groups: UnionFind,
    history: Vec<usize>,
    winner: Option<Player>,
}

impl HexPosition {
    pub fn new(size: usize) -> Self {
        assert!((1..=MAX_SIZE).contains(&size), "unsupported hex size {size}");
        let tables = HexTables::shared(size);
        HexPosition {
            key: tables.base,
            board: vec![EMPTY; size * size],
            to_move: Player::First,
            groups: UnionFind::new(size * size + 4),
            history: Vec::new(),
            winner: None,
            tables,
        }
    }

    /// Replays a space-separated move list such as `"d4 c5"`.
    pub fn from_notation(size: usize, moves: &str) -> Result<Self, NotationError> {
        let mut pos = HexPosition::new(size);
        for token in moves.split_whitespace() {
            let cell = pos.parse_cell(token)?;
            if pos.is_terminal() || pos.board[cell] != EMPTY {
                return Err(NotationError::Illegal(token.to_string()));
            }
            pos = pos.play(cell);
        }
        Ok(pos)
    }

    pub fn parse_cell(&self, token: &str) -> Result<usize, NotationError> {
        let size = self.size();
        let mut chars = token.chars();
        let col = chars
            .next()
            .filter(char::is_ascii_lowercase)
            .ok_or_else(|| NotationError::Malformed(token.to_string()))?;
        let row: usize = chars
            .as_str()
            .parse()
            .map_err(|_| NotationError::Malformed(token.to_string()))?;
        let col = (col as u8 - b'a') as usize;
        if row == 0 || row > size || col >= size {
            return Err(NotationError::OffBoard(token.to_string()));
        }
        Ok((row - 1) * size + col)
    }

    pub fn size(&self) -> usize {
        self.tables.size
    }

    pub fn cell(&self, cell: usize) -> Option<Player> {
        match self.board[cell] {
            FIRST => Some(Player::First),
            SECOND => Some(Player::Second),
            _ => None,
        }
    }

    pub fn winner(&self) -> Option<Player> {
        self.winner
    }

    pub fn neighbors(&self, cell: usize) -> &[usize] {
        &self.tables.neighbors[cell]
    }

    pub fn stone_counts(&self) -> (usize, usize) {
        let first = self.board.iter().filter(|&&s| s == FIRST).count();
        let second = self.board.iter().filter(|&&s| s == SECOND).count();
        (first, second)
    }

    pub fn cells(&self) -> impl Iterator<Item = Option<Player>> + '_ {
        (0..self.board.len()).map(|c| self.cell(c))
    }
}

impl fmt::Debug for HexPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let size = self.size();
        writeln!(f, "HexPosition {{ to_move: {:?}, key: {} }}", self.to_move, self.key)?;
        for r in 0..size {
            write!(f, "{:width$}", "", width = r)?;
            for c in 0..size {
                let ch = match self.board[r * size + c] {
                    FIRST => 'X',
                    SECOND => 'O',
                    _ => '.',
                };
                write!(f, "{ch} ")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl GameState for HexPosition {
    fn to_move(&self) -> Player {
        self.to_move
    }

    fn is_terminal(&self) -> bool {
        self.winner.is_some()
    }

    fn terminal_value(&self) -> f64 {
        assert!(self.is_terminal(), "terminal_value on a live hex position");
        // The player who just moved made the connection.
        -1.0
    }

    fn legal_moves(&self) -> Vec<usize> {
        assert!(!self.is_terminal(), "legal_moves on a finished hex game");
        self.board
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == EMPTY)
            .map(|(i, _)| i)
            .collect()
    }

    fn play(&self, cell: usize) -> Self {
        assert!(
            cell < self.board.len() && self.board[cell] == EMPTY && self.winner.is_none(),
            "illegal hex move {cell}"
        );
        let size = self.size();
        let stone = stone_of(self.to_move);
        let mut next = self.clone();
        next.board[cell] = stone;
        next.key ^= self.tables.zobrist[cell][(stone - 1) as usize];
        for &n in &self.tables.neighbors[cell] {
            if next.board[n] == stone {
                next.groups.union(cell, n);
            }
        }
        for edge in edge_links(size, cell, stone).into_iter().flatten() {
            next.groups.union(cell, edge);
        }
        let base = size * size;
        let connected = match stone {
            FIRST => next.groups.connected(base + TOP, base + BOTTOM),
            _ => next.groups.connected(base + LEFT, base + RIGHT),
        };
        if connected {
            next.winner = Some(self.to_move);
        }
        next.to_move = self.to_move.opponent();
        next.history.push(cell);
        next
    }

    fn key(&self) -> StateKey {
        self.key
    }

    fn max_plies(&self) -> usize {
        self.board.len()
    }

    fn game_name(&self) -> String {
        format!("hex{}", self.size())
    }

    fn move_notation(&self, cell: usize) -> String {
        let size = self.size();
        format!("{}{}", (b'a' + (cell % size) as u8) as char, cell / size + 1)
    }

    fn history(&self) -> &[usize] {
        &self.history
    }
}

/// Winner of an arbitrary board given as row-major cells, computed from
/// scratch with a union-find over two virtual nodes per player.
///
/// Returns `None` when neither player connects. On a board where both
/// connect (unreachable in play) the first player is reported.
pub fn hex_winner(size: usize, cells: &[Option<Player>]) -> Option<Player> {
    assert_eq!(cells.len(), size * size);
    let base = size * size;
    let mut uf = UnionFind::new(base + 4);
    for (cell, occupant) in cells.iter().enumerate() {
        let Some(player) = *occupant else { continue };
        let stone = stone_of(player);
        for n in neighbors_of(size, cell) {
            if cells[n] == Some(player) {
                uf.union(cell, n);
            }
        }
        for edge in edge_links(size, cell, stone).into_iter().flatten() {
            uf.union(cell, edge);
        }
    }
    if uf.connected(base + TOP, base + BOTTOM) {
        Some(Player::First)
    } else if uf.connected(base + LEFT, base + RIGHT) {
        Some(Player::Second)
    } else {
        None
    }
}

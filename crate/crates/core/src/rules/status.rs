use serde::{Deserialize, Serialize};

use super::attacks::Bitboard;
use super::moves::Move;
use super::position::Position;
use super::types::{Color, PieceKind};

/// Half-moves without a qualifying reset that end the game.
pub const FIFTY_MOVE_PLIES: u32 = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Ongoing,
    WhiteWins,
    BlackWins,
    Draw,
}

impl Outcome {
    pub fn win_for(color: Color) -> Outcome {
        match color {
            Color::White => Outcome::WhiteWins,
            Color::Black => Outcome::BlackWins,
        }
    }

    pub fn is_decisive(self) -> bool {
        matches!(self, Outcome::WhiteWins | Outcome::BlackWins)
    }

    /// Game-result marker: `1-0`, `0-1`, `1/2-1/2` or `*`.
    pub fn marker(self) -> &'static str {
        match self {
            Outcome::WhiteWins => "1-0",
            Outcome::BlackWins => "0-1",
            Outcome::Draw => "1/2-1/2",
            Outcome::Ongoing => "*",
        }
    }

    pub fn from_marker(s: &str) -> Option<Outcome> {
        Some(match s {
            "1-0" => Outcome::WhiteWins,
            "0-1" => Outcome::BlackWins,
            "1/2-1/2" => Outcome::Draw,
            "*" => Outcome::Ongoing,
            _ => return None,
        })
    }

    /// Score from `color`'s point of view: +1 win, 0 draw, -1 loss.
    pub fn score_for(self, color: Color) -> i32 {
        match (self, color) {
            (Outcome::WhiteWins, Color::White) | (Outcome::BlackWins, Color::Black) => 1,
            (Outcome::WhiteWins, Color::Black) | (Outcome::BlackWins, Color::White) => -1,
            _ => 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reason {
    Checkmate,
    Stalemate,
    FiftyMove,
    ThreefoldRepetition,
    /// Still running, or stopped externally (ply cap).
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GameStatus {
    pub state: Outcome,
    pub reason: Reason,
}

impl GameStatus {
    pub const ONGOING: GameStatus = GameStatus {
        state: Outcome::Ongoing,
        reason: Reason::None,
    };

    pub fn is_terminal(&self) -> bool {
        self.state != Outcome::Ongoing
    }
}

/// Identity of a position for repetition counting: board, side to move,
/// effective castling rights and en-passant target. Counters are ignored.
///
/// Keys compare whole boards, so equal keys mean equal states; there are no
/// hash collisions to worry about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RepetitionKey {
    pieces: [Bitboard; 6],
    white: Bitboard,
    /// side (bit 0), castling (bits 1..5), en-passant square + 1 (bits 8..15).
    meta: u16,
}

pub fn repetition_key(p: &Position) -> RepetitionKey {
    let mut pieces = [0; 6];
    for kind in PieceKind::ALL {
        pieces[kind.index()] = p.pieces(Color::White, kind) | p.pieces(Color::Black, kind);
    }
    let castling = if p.variant().castling_enabled() {
        p.castling_rights().bits()
    } else {
        0
    };
    let ep = p.ep_target().map_or(0, |s| s.index() as u16 + 1);
    RepetitionKey {
        pieces,
        white: p.color_bb(Color::White),
        meta: (p.side_to_move() as u16) | ((castling as u16) << 1) | (ep << 8),
    }
}

/// Terminal classification given the legal moves of `p` (empty means no moves).
///
/// Mate and stalemate take precedence over the counter-based draws.
pub fn status_with_moves(p: &Position, moves: &[Move], history: &[RepetitionKey]) -> GameStatus {
    if moves.is_empty() {
        let mover = p.side_to_move().opposite();
        return if p.in_check() {
            GameStatus {
                state: Outcome::win_for(mover),
                reason: Reason::Checkmate,
            }
        } else if p.variant().stalemate_wins() {
            GameStatus {
                state: Outcome::win_for(mover),
                reason: Reason::Stalemate,
            }
        } else {
            GameStatus {
                state: Outcome::Draw,
                reason: Reason::Stalemate,
            }
        };
    }
    if p.halfmove_clock() >= FIFTY_MOVE_PLIES {
        return GameStatus {
            state: Outcome::Draw,
            reason: Reason::FiftyMove,
        };
    }
    if repetition_count(p, history) >= 3 {
        return GameStatus {
            state: Outcome::Draw,
            reason: Reason::ThreefoldRepetition,
        };
    }
    GameStatus::ONGOING
}

/// Occurrences of `p` counting `p` itself plus the matching entries of
/// `history`, the keys of all earlier positions of the game (oldest first).
pub fn repetition_count(p: &Position, history: &[RepetitionKey]) -> usize {
    let key = repetition_key(p);
    1 + history.iter().filter(|k| **k == key).count()
}

/// Game status of `p` given the repetition keys of every earlier position.
pub fn status(p: &Position, history: &[RepetitionKey]) -> GameStatus {
    let moves = p.legal_moves();
    status_with_moves(p, &moves, history)
}

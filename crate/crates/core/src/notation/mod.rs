//! Text formats: extended FEN, long algebraic moves, JSON-lines game records
//! and versioned CSV reports.

pub mod csv;
pub mod fen;
pub mod lan;
pub mod record;

use crate::rules::{IllegalPosition, Variant};

#[derive(Debug, thiserror::Error)]
pub enum NotationError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("illegal position: {0}")]
    IllegalPosition(#[from] IllegalPosition),
    #[error("variant mismatch: expected {expected}, found {found}")]
    VariantMismatch { expected: Variant, found: Variant },
    #[error("illegal move {mv} at ply {ply}")]
    IllegalMove { mv: String, ply: usize },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl NotationError {
    pub(crate) fn syntax(msg: impl Into<String>) -> NotationError {
        NotationError::Syntax(msg.into())
    }
}

pub use fen::{parse_fen, parse_fen_bytes, parse_fen_for, serialize_fen};
pub use lan::{parse_lan, parse_lan_squares, serialize_lan};
pub use record::{read_game_records, write_game_records, ChosenBy, GameRecord, PlyInfo};

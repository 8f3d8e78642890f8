//! Long algebraic notation: `e2e4`, `b7b8q`, castling as the king's move
//! (`e1g1`). Self-captures are written like any capture.

use super::NotationError;
use crate::rules::{Move, PieceKind, Position, Square};

/// Syntax-only parse into `(from, to, promotion)`.
pub fn parse_lan_squares(text: &str) -> Result<(Square, Square, Option<PieceKind>), NotationError> {
    let bad = || NotationError::syntax(format!("bad LAN move '{text}'"));
    if !text.is_ascii() || !(4..=5).contains(&text.len()) {
        return Err(bad());
    }
    let from = Square::parse(&text[0..2]).ok_or_else(bad)?;
    let to = Square::parse(&text[2..4]).ok_or_else(bad)?;
    let promotion = match text[4..].chars().next() {
        None => None,
        Some(c) => match PieceKind::from_letter(c.to_ascii_lowercase()) {
            Some(k) if PieceKind::PROMOTIONS.contains(&k) => Some(k),
            _ => return Err(bad()),
        },
    };
    Ok((from, to, promotion))
}

/// Resolves `text` against the legal moves of `p`, recovering the flags.
pub fn parse_lan(p: &Position, text: &str) -> Result<Move, NotationError> {
    let (from, to, promotion) = parse_lan_squares(text)?;
    p.legal_moves()
        .into_iter()
        .find(|m| m.from == from && m.to == to && m.promotion == promotion)
        .ok_or_else(|| NotationError::IllegalMove {
            mv: text.to_string(),
            ply: p.plies_played() as usize,
        })
}

pub fn serialize_lan(m: &Move) -> String {
    m.to_string()
}

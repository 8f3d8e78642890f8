//! Board representation, move generation and game termination for Classical
//! chess and the nine altered rule sets.

pub mod attacks;
mod movegen;
pub mod moves;
pub mod position;
pub mod status;
pub mod types;
pub mod variant;

pub use movegen::{legal_moves, perft, perft_divide};
pub use moves::{Move, MoveFlags};
pub use position::{initial_position, CastlingRights, IllegalPosition, Position, PositionSetup};
pub use status::{repetition_key, status, status_with_moves, GameStatus, Outcome, Reason, RepetitionKey};
pub use types::{Color, Piece, PieceKind, Square};
pub use variant::{ClockReset, UnknownVariant, Variant, VariantConfig};

/// A move that is not legal in the position it was applied to.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("illegal move {mv} in this position")]
pub struct IllegalMove {
    pub mv: String,
}

/// Checked transition: `m` is matched against the legal moves of `p` by
/// `(from, to, promotion)`; the flags of the caller's move are ignored.
pub fn apply_move(p: &Position, m: &Move) -> Result<Position, IllegalMove> {
    let legal = p.legal_moves();
    match legal.iter().find(|l| *l == m) {
        Some(l) => Ok(p.make_move(l)),
        None => Err(IllegalMove { mv: m.to_string() }),
    }
}

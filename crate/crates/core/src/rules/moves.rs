use std::cmp::Ordering;
use std::fmt;

use bitflags::bitflags;

use super::types::{PieceKind, Square};

bitflags! {
    /// Classification of a move. An empty set is a quiet move.
    #[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
    pub struct MoveFlags: u16 {
        /// Captures an enemy piece (including en passant).
        const CAPTURE = 1 << 0;
        /// Captures one of the mover's own pieces.
        const SELF_CAPTURE = 1 << 1;
        /// Two-square pawn advance; sets the en-passant target.
        const DOUBLE_PUSH = 1 << 2;
        const EN_PASSANT = 1 << 3;
        const CASTLE_SHORT = 1 << 4;
        const CASTLE_LONG = 1 << 5;
        /// One-square sideways pawn step.
        const LATERAL = 1 << 6;
        /// One-square backward pawn step.
        const BACKWARD = 1 << 7;
    }
}

/// A fully classified move.
///
/// Equality and ordering look only at `(from, to, promotion)`: within one
/// position those three fields identify a legal move uniquely, and the flags
/// are a function of the position.
#[derive(Clone, Copy, Debug)]
pub struct Move {
    pub from: Square,
    pub to: Square,
    pub promotion: Option<PieceKind>,
    pub flags: MoveFlags,
}

impl Move {
    pub const fn new(from: Square, to: Square, promotion: Option<PieceKind>, flags: MoveFlags) -> Move {
        Move {
            from,
            to,
            promotion,
            flags,
        }
    }

    #[inline]
    pub fn is_capture(&self) -> bool {
        self.flags.intersects(MoveFlags::CAPTURE | MoveFlags::SELF_CAPTURE)
    }

    #[inline]
    pub fn is_castle(&self) -> bool {
        self.flags.intersects(MoveFlags::CASTLE_SHORT | MoveFlags::CASTLE_LONG)
    }

    /// A double push that does not start on the mover's home pawn rank.
    ///
    /// The mover's color is implied by the direction of travel.
    pub fn is_torpedo(&self) -> bool {
        if !self.flags.contains(MoveFlags::DOUBLE_PUSH) {
            return false;
        }
        let home = if self.to.rank() > self.from.rank() { 1 } else { 6 };
        self.from.rank() != home
    }

    fn key(&self) -> (Square, Square, u8) {
        (self.from, self.to, self.promotion.map_or(0, |k| k as u8 + 1))
    }
}

impl PartialEq for Move {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Move {}

impl std::hash::Hash for Move {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key().hash(state)
    }
}

impl PartialOrd for Move {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Move {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

/// Long algebraic notation: `e2e4`, `b7b8q`, castling as `e1g1`.
impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.from, self.to)?;
        if let Some(k) = self.promotion {
            write!(f, "{}", k.letter())?;
        }
        Ok(())
    }
}

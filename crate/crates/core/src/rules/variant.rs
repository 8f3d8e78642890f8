use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::types::Color;

/// The ten rule sets: Classical chess and nine single-rule alterations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Classical,
    NoCastling,
    NoCastling10,
    PawnOneSquare,
    StalemateWin,
    Torpedo,
    SemiTorpedo,
    PawnBack,
    PawnSideways,
    SelfCapture,
}

impl Variant {
    pub const ALL: [Variant; 10] = [
        Variant::Classical,
        Variant::NoCastling,
        Variant::NoCastling10,
        Variant::PawnOneSquare,
        Variant::StalemateWin,
        Variant::Torpedo,
        Variant::SemiTorpedo,
        Variant::PawnBack,
        Variant::PawnSideways,
        Variant::SelfCapture,
    ];

    /// Identifier used in extended FEN, JSON records and on the command line.
    pub const fn id(self) -> &'static str {
        match self {
            Variant::Classical => "classical",
            Variant::NoCastling => "nocastling",
            Variant::NoCastling10 => "nocastling10",
            Variant::PawnOneSquare => "pawnonesquare",
            Variant::StalemateWin => "stalematewin",
            Variant::Torpedo => "torpedo",
            Variant::SemiTorpedo => "semitorpedo",
            Variant::PawnBack => "pawnback",
            Variant::PawnSideways => "pawnsideways",
            Variant::SelfCapture => "selfcapture",
        }
    }

    pub const fn config(self) -> VariantConfig {
        VariantConfig::new(self)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown variant `{0}`")]
pub struct UnknownVariant(pub String);

impl FromStr for Variant {
    type Err = UnknownVariant;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s
            .chars()
            .filter(|c| !matches!(c, '-' | '_' | ' ' | '(' | ')' | '='))
            .collect::<String>()
            .to_ascii_lowercase();
        Variant::ALL
            .into_iter()
            .find(|v| v.id() == norm)
            .ok_or_else(|| UnknownVariant(s.to_string()))
    }
}

/// Which pawn moves reset the fifty-move counter (captures always do).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClockReset {
    /// Every pawn move resets.
    AllPawnMoves,
    /// Pawn moves never reset; only captures do.
    CapturesOnly,
    /// Forward pawn moves reset; lateral ones do not.
    ForwardPawnMoves,
}

/// Fully derived rule parameters of a [`Variant`].
///
/// Every field is a pure function of the variant id; there is no way to build
/// an inconsistent configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VariantConfig {
    id: Variant,
    castling_ban_plies: u32,
    castling: bool,
    /// Bit `r` set: a pawn on relative rank `r` may advance two squares.
    double_push_ranks: u8,
    pawn_back: bool,
    pawn_sideways: bool,
    self_capture: bool,
    stalemate_wins: bool,
    clock_reset: ClockReset,
}

impl VariantConfig {
    pub const fn new(id: Variant) -> VariantConfig {
        let mut cfg = VariantConfig {
            id,
            castling_ban_plies: 0,
            castling: true,
            double_push_ranks: 1 << 1,
            pawn_back: false,
            pawn_sideways: false,
            self_capture: false,
            stalemate_wins: false,
            clock_reset: ClockReset::AllPawnMoves,
        };
        match id {
            Variant::Classical => {}
            Variant::NoCastling => cfg.castling = false,
            Variant::NoCastling10 => cfg.castling_ban_plies = 20,
            Variant::PawnOneSquare => cfg.double_push_ranks = 0,
            Variant::StalemateWin => cfg.stalemate_wins = true,
            // Relative ranks 2..=6 (0-based 1..=5); from the 7th a double
            // step would leave the board.
            Variant::Torpedo => cfg.double_push_ranks = 0b0011_1110,
            Variant::SemiTorpedo => cfg.double_push_ranks = 0b0000_0110,
            Variant::PawnBack => {
                cfg.pawn_back = true;
                cfg.clock_reset = ClockReset::CapturesOnly;
            }
            Variant::PawnSideways => {
                cfg.pawn_sideways = true;
                cfg.clock_reset = ClockReset::ForwardPawnMoves;
            }
            Variant::SelfCapture => cfg.self_capture = true,
        }
        cfg
    }

    #[inline]
    pub const fn id(&self) -> Variant {
        self.id
    }

    /// Plies that must have been played before castling becomes legal.
    #[inline]
    pub const fn castling_ban_plies(&self) -> u32 {
        self.castling_ban_plies
    }

    /// Whether castling exists at all in this variant.
    #[inline]
    pub const fn castling_enabled(&self) -> bool {
        self.castling
    }

    /// Whether any pawn move resets the fifty-move counter.
    #[inline]
    pub const fn fifty_move_resets_on_pawn_move(&self) -> bool {
        !matches!(self.clock_reset, ClockReset::CapturesOnly)
    }

    #[inline]
    pub const fn clock_reset(&self) -> ClockReset {
        self.clock_reset
    }

    /// Whether a pawn of `color` standing on absolute `rank` may advance two squares.
    #[inline]
    pub const fn double_push_from(&self, color: Color, rank: u8) -> bool {
        let rel = color.relative_rank(rank);
        rel < 7 && (self.double_push_ranks >> rel) & 1 == 1
    }

    /// Relative rank (0-based) from which a double push is ordinary in every variant.
    pub const HOME_PAWN_RANK: u8 = 1;

    #[inline]
    pub const fn pawn_back(&self) -> bool {
        self.pawn_back
    }

    #[inline]
    pub const fn pawn_sideways(&self) -> bool {
        self.pawn_sideways
    }

    #[inline]
    pub const fn self_capture(&self) -> bool {
        self.self_capture
    }

    #[inline]
    pub const fn stalemate_wins(&self) -> bool {
        self.stalemate_wins
    }
}

impl From<Variant> for VariantConfig {
    fn from(v: Variant) -> Self {
        VariantConfig::new(v)
    }
}

use std::fmt;

use super::attacks::{self, Bitboard, Squares};
use super::moves::{Move, MoveFlags};
use super::types::{Color, Piece, PieceKind, Square};
use super::variant::{ClockReset, Variant, VariantConfig};

/// Castling rights as four bits: White short/long, Black short/long.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct CastlingRights(u8);

impl CastlingRights {
    pub const WHITE_SHORT: u8 = 1;
    pub const WHITE_LONG: u8 = 2;
    pub const BLACK_SHORT: u8 = 4;
    pub const BLACK_LONG: u8 = 8;
    pub const ALL: CastlingRights = CastlingRights(15);
    pub const NONE: CastlingRights = CastlingRights(0);

    pub const fn from_bits(bits: u8) -> CastlingRights {
        CastlingRights(bits & 15)
    }

    pub const fn bits(self) -> u8 {
        self.0
    }

    const fn short_bit(color: Color) -> u8 {
        match color {
            Color::White => Self::WHITE_SHORT,
            Color::Black => Self::BLACK_SHORT,
        }
    }

    const fn long_bit(color: Color) -> u8 {
        match color {
            Color::White => Self::WHITE_LONG,
            Color::Black => Self::BLACK_LONG,
        }
    }

    pub const fn short(self, color: Color) -> bool {
        self.0 & Self::short_bit(color) != 0
    }

    pub const fn long(self, color: Color) -> bool {
        self.0 & Self::long_bit(color) != 0
    }

    pub fn set(&mut self, color: Color, short: bool, long: bool) {
        let (s, l) = (Self::short_bit(color), Self::long_bit(color));
        self.0 &= !(s | l);
        if short {
            self.0 |= s;
        }
        if long {
            self.0 |= l;
        }
    }
}

/// Rights lost when a move touches the given square (either end).
const fn rights_mask(sq: usize) -> u8 {
    match sq {
        0 => CastlingRights::WHITE_LONG,
        7 => CastlingRights::WHITE_SHORT,
        56 => CastlingRights::BLACK_LONG,
        63 => CastlingRights::BLACK_SHORT,
        4 => CastlingRights::WHITE_SHORT | CastlingRights::WHITE_LONG,
        60 => CastlingRights::BLACK_SHORT | CastlingRights::BLACK_LONG,
        _ => 0,
    }
}

/// Why a board setup is not a legal position.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum IllegalPosition {
    #[error("{0:?} must have exactly one king")]
    KingCount(Color),
    #[error("pawn on its promotion rank or own back rank at {0}")]
    PawnOnBackRank(Square),
    #[error("side not to move is in check")]
    OpponentInCheck,
    #[error("en-passant target {0} is inconsistent with the board")]
    BadEnPassant(Square),
    #[error("fullmove number must be at least 1")]
    BadFullmove,
    #[error("halfmove clock {0} exceeds the draw threshold")]
    HalfmoveClock(u32),
}

/// Largest halfmove clock a reachable position can carry.
pub const MAX_HALFMOVE_CLOCK: u32 = super::status::FIFTY_MOVE_PLIES + 1;

/// Loose description of a position, validated by [`Position::from_setup`].
#[derive(Clone, Debug)]
pub struct PositionSetup {
    pub board: [Option<Piece>; 64],
    pub side_to_move: Color,
    pub castling: CastlingRights,
    pub ep_target: Option<Square>,
    pub halfmove_clock: u32,
    pub fullmove_number: u32,
    /// Plies played since the game began; derived from the move number if absent.
    pub plies_played: Option<u32>,
    pub variant: Variant,
}

/// Complete game state for any supported variant.
///
/// A `Position` is an immutable value: every transition returns a new one.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Position {
    by_kind: [Bitboard; 6],
    by_color: [Bitboard; 2],
    side: Color,
    castling: CastlingRights,
    ep: Option<Square>,
    halfmove: u32,
    fullmove: u32,
    plies: u32,
    variant: VariantConfig,
}

const BACK_RANKS: Bitboard = 0xFF00_0000_0000_00FF;

impl Position {
    /// Standard initial array; the starting setup is the same in every variant.
    pub fn initial(variant: Variant) -> Position {
        const BACK: [PieceKind; 8] = [
            PieceKind::Rook,
            PieceKind::Knight,
            PieceKind::Bishop,
            PieceKind::Queen,
            PieceKind::King,
            PieceKind::Bishop,
            PieceKind::Knight,
            PieceKind::Rook,
        ];
        let mut p = Position::empty(variant);
        for f in 0..8u8 {
            for (color, back, pawns) in [(Color::White, 0u8, 1u8), (Color::Black, 7, 6)] {
                p.put(Square::new(f, back).unwrap(), Piece::new(color, BACK[f as usize]));
                p.put(Square::new(f, pawns).unwrap(), Piece::new(color, PieceKind::Pawn));
            }
        }
        p.castling = CastlingRights::ALL;
        p
    }

    fn empty(variant: Variant) -> Position {
        Position {
            by_kind: [0; 6],
            by_color: [0; 2],
            side: Color::White,
            castling: CastlingRights::NONE,
            ep: None,
            halfmove: 0,
            fullmove: 1,
            plies: 0,
            variant: variant.config(),
        }
    }

    /// Validates a setup.
    ///
    /// Castling rights whose king or rook is not on its home square are
    /// dropped rather than rejected, so loosely written diagrams still load.
    pub fn from_setup(setup: &PositionSetup) -> Result<Position, IllegalPosition> {
        let mut p = Position::empty(setup.variant);
        for sq in Square::all() {
            if let Some(piece) = setup.board[sq.index()] {
                p.put(sq, piece);
            }
        }
        p.side = setup.side_to_move;
        if setup.fullmove_number == 0 {
            return Err(IllegalPosition::BadFullmove);
        }
        if setup.halfmove_clock > MAX_HALFMOVE_CLOCK {
            return Err(IllegalPosition::HalfmoveClock(setup.halfmove_clock));
        }
        p.fullmove = setup.fullmove_number;
        p.halfmove = setup.halfmove_clock;
        p.plies = setup.plies_played.unwrap_or(
            (setup.fullmove_number - 1)
                .saturating_mul(2)
                .saturating_add(u32::from(setup.side_to_move == Color::Black)),
        );

        for color in Color::ALL {
            if p.pieces(color, PieceKind::King).count_ones() != 1 {
                return Err(IllegalPosition::KingCount(color));
            }
        }
        if let Some(sq) = Squares(p.by_kind[PieceKind::Pawn.index()] & BACK_RANKS).next() {
            return Err(IllegalPosition::PawnOnBackRank(sq));
        }

        let mut rights = setup.castling;
        for color in Color::ALL {
            let back = color.back_rank();
            let king_home = p.piece_at(Square::new(4, back).unwrap()) == Some(Piece::new(color, PieceKind::King));
            let rook_on = |file| p.piece_at(Square::new(file, back).unwrap()) == Some(Piece::new(color, PieceKind::Rook));
            let short = rights.short(color) && king_home && rook_on(7);
            let long = rights.long(color) && king_home && rook_on(0);
            rights.set(color, short, long);
        }
        p.castling = rights;

        if let Some(ep) = setup.ep_target {
            let pusher = p.side.opposite();
            let fwd = pusher.forward();
            let origin = ep.offset(0, -fwd);
            let dest = ep.offset(0, fwd);
            let ok = match (origin, dest) {
                (Some(o), Some(d)) => {
                    p.piece_at(ep).is_none()
                        && p.piece_at(o).is_none()
                        && p.color_at(d) == Some(pusher)
                        && (p.piece_at(d).map(|x| x.kind) == Some(PieceKind::Pawn)
                            || pusher.relative_rank(d.rank()) == 7)
                        && p.variant.double_push_from(pusher, o.rank())
                }
                _ => false,
            };
            if !ok {
                return Err(IllegalPosition::BadEnPassant(ep));
            }
            p.ep = Some(ep);
        }

        let them = p.side.opposite();
        if p.is_attacked(p.king_square(them), p.side) {
            return Err(IllegalPosition::OpponentInCheck);
        }
        Ok(p)
    }

    /// Inverse of [`Position::from_setup`] for a legal position.
    pub fn setup(&self) -> PositionSetup {
        let mut board = [None; 64];
        for sq in Square::all() {
            board[sq.index()] = self.piece_at(sq);
        }
        PositionSetup {
            board,
            side_to_move: self.side,
            castling: self.castling,
            ep_target: self.ep,
            halfmove_clock: self.halfmove,
            fullmove_number: self.fullmove,
            plies_played: Some(self.plies),
            variant: self.variant.id(),
        }
    }

    #[inline]
    fn put(&mut self, sq: Square, piece: Piece) {
        self.by_kind[piece.kind.index()] |= sq.bit();
        self.by_color[piece.color.index()] |= sq.bit();
    }

    #[inline]
    fn clear(&mut self, sq: Square) {
        let mask = !sq.bit();
        for bb in &mut self.by_kind {
            *bb &= mask;
        }
        self.by_color[0] &= mask;
        self.by_color[1] &= mask;
    }

    pub fn piece_at(&self, sq: Square) -> Option<Piece> {
        let color = self.color_at(sq)?;
        let kind = self.kind_at(sq)?;
        Some(Piece::new(color, kind))
    }

    #[inline]
    pub fn color_at(&self, sq: Square) -> Option<Color> {
        if self.by_color[0] & sq.bit() != 0 {
            Some(Color::White)
        } else if self.by_color[1] & sq.bit() != 0 {
            Some(Color::Black)
        } else {
            None
        }
    }

    #[inline]
    pub fn kind_at(&self, sq: Square) -> Option<PieceKind> {
        let bit = sq.bit();
        PieceKind::ALL
            .into_iter()
            .find(|k| self.by_kind[k.index()] & bit != 0)
    }

    #[inline]
    pub fn side_to_move(&self) -> Color {
        self.side
    }

    #[inline]
    pub fn castling_rights(&self) -> CastlingRights {
        self.castling
    }

    #[inline]
    pub fn ep_target(&self) -> Option<Square> {
        self.ep
    }

    #[inline]
    pub fn halfmove_clock(&self) -> u32 {
        self.halfmove
    }

    #[inline]
    pub fn fullmove_number(&self) -> u32 {
        self.fullmove
    }

    /// Plies played since the start of the game (drives NoCastling10).
    #[inline]
    pub fn plies_played(&self) -> u32 {
        self.plies
    }

    #[inline]
    pub fn variant(&self) -> VariantConfig {
        self.variant
    }

    /// Same board under another rule set.
    ///
    /// Used to evaluate one variant's prior on states reached in another.
    pub fn with_variant(&self, variant: Variant) -> Position {
        let mut p = *self;
        p.variant = variant.config();
        p
    }

    #[inline]
    pub fn occupied(&self) -> Bitboard {
        self.by_color[0] | self.by_color[1]
    }

    #[inline]
    pub fn color_bb(&self, color: Color) -> Bitboard {
        self.by_color[color.index()]
    }

    #[inline]
    pub fn pieces(&self, color: Color, kind: PieceKind) -> Bitboard {
        self.by_color[color.index()] & self.by_kind[kind.index()]
    }

    pub fn count(&self, color: Color, kind: PieceKind) -> u32 {
        self.pieces(color, kind).count_ones()
    }

    #[inline]
    pub fn king_square(&self, color: Color) -> Square {
        let bb = self.pieces(color, PieceKind::King);
        debug_assert!(bb != 0);
        Square::from_index_unchecked(bb.trailing_zeros() as u8)
    }

    /// Whether `sq` is attacked by any piece of `by`.
    pub fn is_attacked(&self, sq: Square, by: Color) -> bool {
        self.is_attacked_with(sq, by, self.occupied())
    }

    #[inline]
    pub(crate) fn is_attacked_with(&self, sq: Square, by: Color, occ: Bitboard) -> bool {
        let them = self.by_color[by.index()];
        let k = &self.by_kind;
        let knights = them & k[PieceKind::Knight.index()];
        let kings = them & k[PieceKind::King.index()];
        let pawns = them & k[PieceKind::Pawn.index()];
        let queens = k[PieceKind::Queen.index()];
        let diag = them & (k[PieceKind::Bishop.index()] | queens);
        let ortho = them & (k[PieceKind::Rook.index()] | queens);
        attacks::knight(sq) & knights != 0
            || attacks::king(sq) & kings != 0
            || attacks::pawn(by.opposite(), sq) & pawns != 0
            || attacks::bishop(sq, occ) & diag != 0
            || attacks::rook(sq, occ) & ortho != 0
    }

    pub fn in_check(&self) -> bool {
        self.is_attacked(self.king_square(self.side), self.side.opposite())
    }

    /// Plays a move without checking that it is legal.
    ///
    /// `m` must come from [`Position::legal_moves`] of this position; use
    /// [`crate::rules::apply_move`] for untrusted input.
    pub fn make_move(&self, m: &Move) -> Position {
        let us = self.side;
        let kind = self.kind_at(m.from).expect("move from an empty square");
        let mut p = *self;

        if m.flags.contains(MoveFlags::EN_PASSANT) {
            let victim = m.to.offset(0, -us.forward()).expect("en-passant victim square");
            p.clear(victim);
        } else if m.is_capture() {
            p.clear(m.to);
        }
        p.clear(m.from);
        p.put(m.to, Piece::new(us, m.promotion.unwrap_or(kind)));

        if m.is_castle() {
            let back = us.back_rank();
            let (rf, rt) = if m.flags.contains(MoveFlags::CASTLE_SHORT) {
                (7, 5)
            } else {
                (0, 3)
            };
            p.clear(Square::new(rf, back).unwrap());
            p.put(Square::new(rt, back).unwrap(), Piece::new(us, PieceKind::Rook));
        }

        p.castling = CastlingRights::from_bits(
            p.castling.bits() & !(rights_mask(m.from.index()) | rights_mask(m.to.index())),
        );
        p.ep = if m.flags.contains(MoveFlags::DOUBLE_PUSH) {
            m.from.offset(0, us.forward())
        } else {
            None
        };

        let resets = m.is_capture()
            || (kind == PieceKind::Pawn
                && match self.variant.clock_reset() {
                    ClockReset::AllPawnMoves => true,
                    ClockReset::CapturesOnly => false,
                    ClockReset::ForwardPawnMoves => !m.flags.contains(MoveFlags::LATERAL),
                });
        // Capped so play past the draw threshold still yields a loadable position.
        p.halfmove = if resets { 0 } else { (self.halfmove + 1).min(MAX_HALFMOVE_CLOCK) };
        p.plies = self.plies.saturating_add(1);
        if us == Color::Black {
            p.fullmove = self.fullmove.saturating_add(1);
        }
        p.side = us.opposite();
        p
    }

    /// Whether the mover's king would be safe after `m`. Only touches bitboards.
    #[inline]
    pub(crate) fn leaves_king_safe(&self, m: &Move, kind: PieceKind) -> bool {
        let us = self.side;
        let them = us.opposite();
        let mut p = *self;
        if m.flags.contains(MoveFlags::EN_PASSANT) {
            if let Some(victim) = m.to.offset(0, -us.forward()) {
                p.clear(victim);
            }
        } else if m.is_capture() {
            p.clear(m.to);
        }
        p.clear(m.from);
        p.put(m.to, Piece::new(us, kind));
        let king = if kind == PieceKind::King {
            m.to
        } else {
            p.king_square(us)
        };
        !p.is_attacked_with(king, them, p.occupied())
    }
}

impl fmt::Debug for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Position({})", crate::notation::fen::serialize_fen(self))
    }
}

/// Standard initial array for `variant`.
pub fn initial_position(variant: Variant) -> Position {
    Position::initial(variant)
}

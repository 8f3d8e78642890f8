use super::attacks::{self, Bitboard, Squares};
use super::moves::{Move, MoveFlags};
use super::position::Position;
use super::types::{PieceKind, Square};

impl Position {
    /// Every legal move in canonical `(from, to, promotion)` order.
    pub fn legal_moves(&self) -> Vec<Move> {
        let mut out = Vec::with_capacity(48);
        self.legal_moves_into(&mut out);
        out
    }

    /// Like [`Position::legal_moves`], reusing the caller's buffer.
    pub fn legal_moves_into(&self, out: &mut Vec<Move>) {
        out.clear();
        let us = self.side_to_move();
        let them = us.opposite();
        let own = self.color_bb(us);
        let opp = self.color_bb(them);
        let occ = own | opp;
        let cfg = self.variant();
        let own_king = self.pieces(us, PieceKind::King);
        let self_targets = if cfg.self_capture() { own & !own_king } else { 0 };
        let targets = !own | self_targets;

        for from in Squares(own) {
            let kind = self.kind_at(from).expect("own piece");
            match kind {
                PieceKind::Pawn => self.pawn_moves(from, opp, self_targets, out),
                PieceKind::King => {
                    let normal = attacks::king(from) & targets;
                    let (castle, short_sq) = self.castle_targets(from);
                    for to in Squares(normal | castle) {
                        let flags = if castle & to.bit() != 0 {
                            if Some(to) == short_sq {
                                MoveFlags::CASTLE_SHORT
                            } else {
                                MoveFlags::CASTLE_LONG
                            }
                        } else {
                            capture_flags(to, opp, own)
                        };
                        self.push_if_legal(Move::new(from, to, None, flags), kind, out);
                    }
                }
                _ => {
                    let reach = match kind {
                        PieceKind::Knight => attacks::knight(from),
                        PieceKind::Bishop => attacks::bishop(from, occ),
                        PieceKind::Rook => attacks::rook(from, occ),
                        _ => attacks::queen(from, occ),
                    };
                    for to in Squares(reach & targets) {
                        let m = Move::new(from, to, None, capture_flags(to, opp, own));
                        self.push_if_legal(m, kind, out);
                    }
                }
            }
        }
        debug_assert!(out.windows(2).all(|w| w[0] < w[1]));
    }

    #[inline]
    fn push_if_legal(&self, m: Move, kind: PieceKind, out: &mut Vec<Move>) {
        if self.leaves_king_safe(&m, kind) {
            out.push(m);
        }
    }

    fn pawn_moves(&self, from: Square, opp: Bitboard, self_targets: Bitboard, out: &mut Vec<Move>) {
        let us = self.side_to_move();
        let cfg = self.variant();
        let occ = self.occupied();
        let fwd = us.forward();

        let mut pushes: Bitboard = 0;
        let mut doubles: Bitboard = 0;
        let mut laterals: Bitboard = 0;
        let mut backs: Bitboard = 0;

        if let Some(one) = from.offset(0, fwd) {
            if occ & one.bit() == 0 {
                pushes |= one.bit();
                if cfg.double_push_from(us, from.rank()) {
                    if let Some(two) = one.offset(0, fwd) {
                        if occ & two.bit() == 0 {
                            doubles |= two.bit();
                        }
                    }
                }
            }
        }
        if cfg.pawn_sideways() {
            for df in [-1, 1] {
                if let Some(side) = from.offset(df, 0) {
                    if occ & side.bit() == 0 {
                        laterals |= side.bit();
                    }
                }
            }
        }
        if cfg.pawn_back() {
            if let Some(back) = from.offset(0, -fwd) {
                if us.relative_rank(back.rank()) >= 1 && occ & back.bit() == 0 {
                    backs |= back.bit();
                }
            }
        }
        let attack = attacks::pawn(us, from);
        let captures = attack & opp;
        let self_caps = attack & self_targets;
        let ep = match self.ep_target() {
            Some(e) if attack & e.bit() != 0 => {
                // The double-pushed piece sits one step beyond the target.
                match e.offset(0, -fwd) {
                    Some(victim) if opp & victim.bit() != 0 => e.bit(),
                    _ => 0,
                }
            }
            _ => 0,
        };

        for to in Squares(pushes | doubles | laterals | backs | captures | self_caps | ep) {
            let bit = to.bit();
            let flags = if ep & bit != 0 {
                MoveFlags::EN_PASSANT | MoveFlags::CAPTURE
            } else if captures & bit != 0 {
                MoveFlags::CAPTURE
            } else if self_caps & bit != 0 {
                MoveFlags::SELF_CAPTURE
            } else if doubles & bit != 0 {
                MoveFlags::DOUBLE_PUSH
            } else if laterals & bit != 0 {
                MoveFlags::LATERAL
            } else if backs & bit != 0 {
                MoveFlags::BACKWARD
            } else {
                MoveFlags::empty()
            };
            if us.relative_rank(to.rank()) == 7 {
                for promo in PieceKind::PROMOTIONS {
                    self.push_if_legal(Move::new(from, to, Some(promo), flags), PieceKind::Pawn, out);
                }
            } else {
                self.push_if_legal(Move::new(from, to, None, flags), PieceKind::Pawn, out);
            }
        }
    }

    /// Castling destinations for the king on `from`, plus the short-side square.
    fn castle_targets(&self, from: Square) -> (Bitboard, Option<Square>) {
        let cfg = self.variant();
        let us = self.side_to_move();
        let rights = self.castling_rights();
        if !cfg.castling_enabled()
            || self.plies_played() < cfg.castling_ban_plies()
            || !(rights.short(us) || rights.long(us))
        {
            return (0, None);
        }
        let back = us.back_rank();
        if from != Square::new(4, back).unwrap() || self.in_check() {
            return (0, None);
        }
        let them = us.opposite();
        let occ = self.occupied();
        let rook = self.pieces(us, PieceKind::Rook);
        let sq = |f| Square::new(f, back).unwrap();
        let mut out = 0;
        let mut short_sq = None;
        if rights.short(us)
            && rook & sq(7).bit() != 0
            && occ & (sq(5).bit() | sq(6).bit()) == 0
            && !self.is_attacked(sq(5), them)
            && !self.is_attacked(sq(6), them)
        {
            out |= sq(6).bit();
            short_sq = Some(sq(6));
        }
        if rights.long(us)
            && rook & sq(0).bit() != 0
            && occ & (sq(1).bit() | sq(2).bit() | sq(3).bit()) == 0
            && !self.is_attacked(sq(3), them)
            && !self.is_attacked(sq(2), them)
        {
            out |= sq(2).bit();
        }
        (out, short_sq)
    }

    /// Whether the side to move has at least one legal move.
    pub fn has_legal_move(&self) -> bool {
        let mut buf = Vec::with_capacity(48);
        self.legal_moves_into(&mut buf);
        !buf.is_empty()
    }
}

#[inline]
fn capture_flags(to: Square, opp: Bitboard, own: Bitboard) -> MoveFlags {
    if opp & to.bit() != 0 {
        MoveFlags::CAPTURE
    } else if own & to.bit() != 0 {
        MoveFlags::SELF_CAPTURE
    } else {
        MoveFlags::empty()
    }
}

/// Legal moves of `p`; free-function form of [`Position::legal_moves`].
pub fn legal_moves(p: &Position) -> Vec<Move> {
    p.legal_moves()
}

/// Leaf count of the legal move tree at exactly `depth` plies.
pub fn perft(p: &Position, depth: u32) -> u64 {
    if depth == 0 {
        return 1;
    }
    let moves = p.legal_moves();
    if depth == 1 {
        return moves.len() as u64;
    }
    moves.iter().map(|m| perft(&p.make_move(m), depth - 1)).sum()
}

/// Per-root-move leaf counts, handy when hunting a generator bug.
pub fn perft_divide(p: &Position, depth: u32) -> Vec<(Move, u64)> {
    assert!(depth >= 1, "divide needs at least one ply");
    p.legal_moves()
        .into_iter()
        .map(|m| (m, perft(&p.make_move(&m), depth - 1)))
        .collect()
}

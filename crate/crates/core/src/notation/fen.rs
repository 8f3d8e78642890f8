//! Extended FEN: the six standard fields, then `variant=<id>`, then
//! `plies=<n>` for NoCastling10 (whose castling ban counts plies from the
//! start of the game, which the move number alone cannot recover for
//! positions set up mid-game).

use std::fmt::Write as _;

use super::NotationError;
use crate::rules::{CastlingRights, Color, Piece, Position, PositionSetup, Square, Variant};

/// Parses a standard or extended FEN. Without a `variant=` field the
/// position is Classical.
pub fn parse_fen(text: &str) -> Result<Position, NotationError> {
    parse_fields(text, None)
}

/// Parses a FEN for a known variant. A standard FEN takes on `variant`;
/// an extended FEN naming a different variant is rejected.
pub fn parse_fen_for(text: &str, variant: Variant) -> Result<Position, NotationError> {
    parse_fields(text, Some(variant))
}

/// Byte-level entry point; invalid UTF-8 is a syntax error.
pub fn parse_fen_bytes(bytes: &[u8]) -> Result<Position, NotationError> {
    let text = std::str::from_utf8(bytes).map_err(|_| NotationError::syntax("FEN is not UTF-8"))?;
    parse_fen(text)
}

fn parse_fields(text: &str, expected: Option<Variant>) -> Result<Position, NotationError> {
    let fields: Vec<&str> = text.split_ascii_whitespace().collect();
    let (standard, extra): (Vec<&str>, Vec<&str>) = fields.iter().partition(|f| !f.contains('='));
    if standard.len() != 4 && standard.len() != 6 {
        return Err(NotationError::syntax(format!(
            "expected 4 or 6 standard fields, found {}",
            standard.len()
        )));
    }
    // Key=value fields must all come after the standard ones.
    if fields[..standard.len()].iter().any(|f| f.contains('=')) {
        return Err(NotationError::syntax("extension field before standard fields"));
    }

    let board = parse_board(standard[0])?;
    let side_to_move = match standard[1] {
        "w" => Color::White,
        "b" => Color::Black,
        other => return Err(NotationError::syntax(format!("bad side to move '{other}'"))),
    };
    let castling = parse_castling(standard[2])?;
    let ep_target = match standard[3] {
        "-" => None,
        s => Some(Square::parse(s).ok_or_else(|| NotationError::syntax(format!("bad en-passant square '{s}'")))?),
    };
    let (halfmove_clock, fullmove_number) = if standard.len() == 6 {
        (parse_number(standard[4], "halfmove clock")?, parse_number(standard[5], "fullmove number")?)
    } else {
        (0, 1)
    };

    let mut variant = None;
    let mut plies = None;
    for field in extra {
        let (key, value) = field.split_once('=').expect("partitioned on '='");
        match key {
            "variant" if variant.is_none() => {
                variant = Some(
                    value
                        .parse::<Variant>()
                        .map_err(|e| NotationError::syntax(e.to_string()))?,
                );
            }
            "plies" if plies.is_none() => plies = Some(parse_number(value, "plies")?),
            _ => return Err(NotationError::syntax(format!("unknown or repeated field '{key}'"))),
        }
    }
    let variant = match (variant, expected) {
        (Some(found), Some(expected)) if found != expected => {
            return Err(NotationError::VariantMismatch { expected, found })
        }
        (Some(v), _) => v,
        (None, Some(v)) => v,
        (None, None) => Variant::Classical,
    };
    if plies.is_some() && variant != Variant::NoCastling10 {
        return Err(NotationError::syntax(format!(
            "plies field only applies to {}",
            Variant::NoCastling10
        )));
    }

    let setup = PositionSetup {
        board,
        side_to_move,
        castling,
        ep_target,
        halfmove_clock,
        fullmove_number,
        plies_played: plies,
        variant,
    };
    Ok(Position::from_setup(&setup)?)
}

fn parse_number(s: &str, what: &str) -> Result<u32, NotationError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(NotationError::syntax(format!("bad {what} '{s}'")));
    }
    s.parse().map_err(|_| NotationError::syntax(format!("{what} out of range")))
}

fn parse_board(text: &str) -> Result<[Option<Piece>; 64], NotationError> {
    let mut board = [None; 64];
    let ranks: Vec<&str> = text.split('/').collect();
    if ranks.len() != 8 {
        return Err(NotationError::syntax(format!("expected 8 ranks, found {}", ranks.len())));
    }
    for (i, row) in ranks.iter().enumerate() {
        let rank = 7 - i as u8;
        let mut file = 0u8;
        for c in row.chars() {
            if let Some(d) = c.to_digit(10) {
                if !(1..=8).contains(&d) {
                    return Err(NotationError::syntax(format!("bad empty-square count '{c}'")));
                }
                file += d as u8;
            } else {
                let piece = Piece::from_fen_char(c)
                    .ok_or_else(|| NotationError::syntax(format!("bad piece letter '{c}'")))?;
                let sq = Square::new(file, rank)
                    .ok_or_else(|| NotationError::syntax(format!("rank {} too long", rank + 1)))?;
                board[sq.index()] = Some(piece);
                file += 1;
            }
            if file > 8 {
                return Err(NotationError::syntax(format!("rank {} too long", rank + 1)));
            }
        }
        if file != 8 {
            return Err(NotationError::syntax(format!("rank {} has {file} files", rank + 1)));
        }
    }
    Ok(board)
}

fn parse_castling(s: &str) -> Result<CastlingRights, NotationError> {
    if s == "-" {
        return Ok(CastlingRights::NONE);
    }
    let mut bits = 0u8;
    for c in s.chars() {
        let bit = match c {
            'K' => CastlingRights::WHITE_SHORT,
            'Q' => CastlingRights::WHITE_LONG,
            'k' => CastlingRights::BLACK_SHORT,
            'q' => CastlingRights::BLACK_LONG,
            _ => return Err(NotationError::syntax(format!("bad castling field '{s}'"))),
        };
        if bits & bit != 0 {
            return Err(NotationError::syntax(format!("bad castling field '{s}'")));
        }
        bits |= bit;
    }
    if s.is_empty() {
        return Err(NotationError::syntax("empty castling field"));
    }
    Ok(CastlingRights::from_bits(bits))
}

/// Canonical extended FEN; `parse_fen(serialize_fen(p)) == p` for every
/// position.
pub fn serialize_fen(p: &Position) -> String {
    let mut out = String::with_capacity(90);
    for rank in (0..8u8).rev() {
        let mut empty = 0;
        for file in 0..8u8 {
            match p.piece_at(Square::new(file, rank).expect("on board")) {
                Some(piece) => {
                    if empty > 0 {
                        out.push(char::from(b'0' + empty));
                        empty = 0;
                    }
                    out.push(piece.fen_char());
                }
                None => empty += 1,
            }
        }
        if empty > 0 {
            out.push(char::from(b'0' + empty));
        }
        if rank > 0 {
            out.push('/');
        }
    }
    out.push(' ');
    out.push(if p.side_to_move() == Color::White { 'w' } else { 'b' });
    out.push(' ');
    let rights = p.castling_rights();
    if rights == CastlingRights::NONE {
        out.push('-');
    } else {
        for (bit, c) in [
            (CastlingRights::WHITE_SHORT, 'K'),
            (CastlingRights::WHITE_LONG, 'Q'),
            (CastlingRights::BLACK_SHORT, 'k'),
            (CastlingRights::BLACK_LONG, 'q'),
        ] {
            if rights.bits() & bit != 0 {
                out.push(c);
            }
        }
    }
    match p.ep_target() {
        Some(sq) => write!(out, " {sq}").expect("write to string"),
        None => out.push_str(" -"),
    }
    let variant = p.variant().id();
    write!(out, " {} {} variant={}", p.halfmove_clock(), p.fullmove_number(), variant).expect("write to string");
    if variant == Variant::NoCastling10 {
        write!(out, " plies={}", p.plies_played()).expect("write to string");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const START: &str = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1";

    #[test]
    fn standard_start_is_classical_initial() {
        assert_eq!(parse_fen(START).unwrap(), Position::initial(Variant::Classical));
        assert_eq!(serialize_fen(&Position::initial(Variant::Classical)), format!("{START} variant=classical"));
    }

    #[test]
    fn extended_fields() {
        let p = parse_fen("4k3/4P3/5K2/8/8/8/8/8 w - - 0 1 variant=stalematewin").unwrap();
        assert_eq!(p.variant().id(), Variant::StalemateWin);
        let p = parse_fen(&format!("{START} variant=nocastling10 plies=7")).unwrap();
        assert_eq!(p.plies_played(), 7);
        assert!(parse_fen(&format!("{START} plies=7")).is_err());
        let p = Position::initial(Variant::NoCastling10);
        assert_eq!(parse_fen(&serialize_fen(&p)).unwrap(), p);
    }

    #[test]
    fn variant_mismatch() {
        let text = format!("{START} variant=torpedo");
        assert!(matches!(
            parse_fen_for(&text, Variant::PawnBack),
            Err(NotationError::VariantMismatch { .. })
        ));
        assert_eq!(parse_fen_for(START, Variant::PawnBack).unwrap().variant().id(), Variant::PawnBack);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_fen("8/8/8/8/8/8/8/8 w - - 0 1"), Err(NotationError::IllegalPosition(_))));
        for bad in [
            "",
            "8/8/8 w - - 0 1",
            "rnbqkbnr/pppppppp/9/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1",
            "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR x KQkq - 0 1",
            "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KK - 0 1",
            "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - -1 1",
            "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1 variant=chess960",
        ] {
            assert!(matches!(parse_fen(bad), Err(NotationError::Syntax(_))), "{bad}");
        }
        assert!(parse_fen_bytes(&[0xff, 0xfe]).is_err());
    }

    #[test]
    fn ep_target_depends_on_double_push_ranks() {
        // White just played e3-e5.
        let board = "4k3/8/8/3pP3/8/8/8/4K3 b - e4 0 1";
        assert!(matches!(parse_fen(board), Err(NotationError::IllegalPosition(_))));
        assert!(parse_fen(&format!("{board} variant=torpedo")).is_ok());
        assert!(parse_fen(&format!("{board} variant=semitorpedo")).is_ok());
        assert!(parse_fen(&format!("{board} variant=pawnonesquare")).is_err());
        // b6-b8 promoted on arrival; the skipped square stays capturable.
        let promoted = "1Q6/8/8/8/8/8/8/k3K3 b - b7 0 1";
        assert!(parse_fen(promoted).is_err());
        let p = parse_fen(&format!("{promoted} variant=torpedo")).unwrap();
        assert_eq!(p.ep_target(), Square::parse("b7"));
    }
}

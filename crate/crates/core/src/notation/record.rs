//! JSON-lines game records, one game per line in append-only files.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::fen::{parse_fen_for, serialize_fen};
use super::lan::{parse_lan_squares, serialize_lan};
use super::NotationError;
use crate::rules::{repetition_key, status_with_moves, GameStatus, Move, Outcome, Position, Reason, Variant};

/// How the move at one ply was chosen from the search's visit counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChosenBy {
    Softmax,
    Argmax,
}

/// Search metadata for one ply. `visits` is aligned with the canonical
/// legal-move order of the position before the move.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlyInfo {
    pub visits: Vec<u32>,
    pub chosen_by: ChosenBy,
}

/// One finished (or capped) game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameRecord {
    pub variant: Variant,
    pub start_fen: String,
    pub moves: Vec<Move>,
    pub result: GameStatus,
    /// Stopped by the ply cap; `result` is then a draw with reason `None`.
    pub capped: bool,
    pub per_ply: Option<Vec<PlyInfo>>,
    pub seed: u64,
}

#[derive(Serialize, Deserialize)]
struct RawRecord {
    variant: Variant,
    start_fen: String,
    seed: u64,
    result: String,
    reason: Reason,
    capped: bool,
    moves: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    per_ply: Option<Vec<PlyInfo>>,
}

/// Positions visited while replaying a record, plus the status reached.
#[derive(Clone, Debug)]
pub struct Replay {
    /// `positions[i]` is the position before move `i`; the last entry is final.
    pub positions: Vec<Position>,
    pub final_status: GameStatus,
}

impl GameRecord {
    pub fn start_position(&self) -> Result<Position, NotationError> {
        parse_fen_for(&self.start_fen, self.variant)
    }

    pub fn plies(&self) -> usize {
        self.moves.len()
    }

    /// Replays the moves from the start position, checking each for legality
    /// and that no earlier position was already terminal.
    pub fn replay(&self) -> Result<Replay, NotationError> {
        let start = self.start_position()?;
        let lans: Vec<String> = self.moves.iter().map(serialize_lan).collect();
        let (positions, final_status, _) = replay_lan(start, &lans)?;
        Ok(Replay {
            positions,
            final_status,
        })
    }

    /// Replays and checks that the stored result matches the one reached.
    pub fn validate(&self) -> Result<Replay, NotationError> {
        let replay = self.replay()?;
        let expected = if self.capped {
            GameStatus {
                state: Outcome::Draw,
                reason: Reason::None,
            }
        } else {
            replay.final_status
        };
        if self.capped && replay.final_status.is_terminal() {
            return Err(NotationError::syntax("capped game ends in a terminal position"));
        }
        if self.result != expected {
            return Err(NotationError::syntax(format!(
                "stored result {} ({:?}) differs from replayed {} ({:?})",
                self.result.state.marker(),
                self.result.reason,
                expected.state.marker(),
                expected.reason
            )));
        }
        if let Some(per_ply) = &self.per_ply {
            if per_ply.len() != self.moves.len() {
                return Err(NotationError::syntax("per_ply length differs from moves length"));
            }
        }
        Ok(replay)
    }

    fn to_raw(&self) -> RawRecord {
        RawRecord {
            variant: self.variant,
            start_fen: self.start_fen.clone(),
            seed: self.seed,
            result: self.result.state.marker().to_string(),
            reason: self.result.reason,
            capped: self.capped,
            moves: self.moves.iter().map(serialize_lan).collect(),
            per_ply: self.per_ply.clone(),
        }
    }

    fn from_raw(raw: RawRecord) -> Result<GameRecord, NotationError> {
        let state = Outcome::from_marker(&raw.result)
            .ok_or_else(|| NotationError::syntax(format!("bad result marker '{}'", raw.result)))?;
        let start = parse_fen_for(&raw.start_fen, raw.variant)?;
        // Canonicalize so that re-serializing is byte-stable.
        let start_fen = serialize_fen(&start);
        let (_, _, moves) = replay_lan(start, &raw.moves)?;
        Ok(GameRecord {
            variant: raw.variant,
            start_fen,
            moves,
            result: GameStatus {
                state,
                reason: raw.reason,
            },
            capped: raw.capped,
            per_ply: raw.per_ply,
            seed: raw.seed,
        })
    }

    /// One JSON object, no trailing newline.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(&self.to_raw()).expect("records always serialize")
    }

    pub fn from_json_line(line: &str) -> Result<GameRecord, NotationError> {
        let raw: RawRecord = serde_json::from_str(line).map_err(|e| NotationError::syntax(e.to_string()))?;
        GameRecord::from_raw(raw)
    }
}

/// Plays LAN moves from `start`. Fails on an illegal move or on a move made
/// after the game already ended.
pub fn replay_lan(
    start: Position,
    lans: &[impl AsRef<str>],
) -> Result<(Vec<Position>, GameStatus, Vec<Move>), NotationError> {
    let mut positions = Vec::with_capacity(lans.len() + 1);
    let mut history = Vec::with_capacity(lans.len());
    let mut moves = Vec::with_capacity(lans.len());
    let mut p = start;
    let mut legal = Vec::new();
    for (ply, text) in lans.iter().enumerate() {
        let text = text.as_ref();
        p.legal_moves_into(&mut legal);
        let st = status_with_moves(&p, &legal, &history);
        if st.is_terminal() {
            return Err(NotationError::syntax(format!(
                "move {text} at ply {ply} after the game ended ({:?})",
                st.reason
            )));
        }
        let (from, to, promotion) = parse_lan_squares(text)?;
        let m = *legal
            .iter()
            .find(|m| m.from == from && m.to == to && m.promotion == promotion)
            .ok_or_else(|| NotationError::IllegalMove {
                mv: text.to_string(),
                ply,
            })?;
        positions.push(p);
        history.push(repetition_key(&p));
        moves.push(m);
        p = p.make_move(&m);
    }
    p.legal_moves_into(&mut legal);
    let final_status = status_with_moves(&p, &legal, &history);
    positions.push(p);
    Ok((positions, final_status, moves))
}

pub fn write_game_records<'a, W: Write>(
    out: &mut W,
    records: impl IntoIterator<Item = &'a GameRecord>,
) -> Result<(), NotationError> {
    for r in records {
        out.write_all(r.to_json_line().as_bytes())?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Reads every non-blank line as a record. Errors carry the 1-based line.
pub fn read_game_records<R: BufRead>(input: R) -> Result<Vec<GameRecord>, NotationError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = GameRecord::from_json_line(&line).map_err(|e| match e {
            NotationError::Syntax(msg) => NotationError::Syntax(format!("line {}: {msg}", i + 1)),
            NotationError::IllegalMove { mv, ply } => NotationError::Syntax(format!(
                "line {}: illegal move {mv} at ply {ply}",
                i + 1
            )),
            other => other,
        })?;
        out.push(rec);
    }
    Ok(out)
}

//! Transcribed reference games: `tests/data/corpus_games.txt`, produced by
//! `tools/extract_corpus_games.py`.

use variant_lab::notation::record::replay_lan;
use variant_lab::notation::serialize_fen;
use variant_lab::rules::{Outcome, Position, Variant};

pub const GAMES: &str = include_str!("../data/corpus_games.txt");
pub const EXCLUSIONS: &str = include_str!("../data/corpus_exclusions.txt");

#[derive(Clone, Debug)]
pub struct CorpusGame {
    pub id: String,
    pub variant: Variant,
    pub result: Outcome,
    pub source_line: usize,
    pub moves: Vec<String>,
    /// (plies played, board field) from the diagrams.
    pub checks: Vec<(usize, String)>,
}

pub fn load() -> Vec<CorpusGame> {
    let mut out = Vec::new();
    let mut cur: Option<CorpusGame> = None;
    for line in GAMES.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        let f: Vec<&str> = line.split_whitespace().collect();
        match f[0] {
            "game" => {
                assert!(cur.is_none(), "unterminated game before {line}");
                cur = Some(CorpusGame {
                    id: f[1].to_string(),
                    variant: f[2].parse().unwrap(),
                    result: Outcome::from_marker(f[3]).unwrap(),
                    source_line: f[4].parse().unwrap(),
                    moves: Vec::new(),
                    checks: Vec::new(),
                });
            }
            "moves" => cur.as_mut().unwrap().moves = f[1..].iter().map(|s| s.to_string()).collect(),
            "check" => {
                cur.as_mut().unwrap().checks.push((f[1].parse().unwrap(), f[2].to_string()));
            }
            "end" => out.push(cur.take().unwrap()),
            other => panic!("unknown corpus record {other}"),
        }
    }
    assert!(cur.is_none(), "corpus ends inside a game");
    out
}

/// Diagrams are sometimes typeset a move away from the text they follow.
pub const DIAGRAM_SLACK: usize = 2;

#[derive(Clone, Debug)]
pub struct CorpusReplay {
    pub plies: usize,
    /// The last position is terminal (otherwise the result was adjudicated).
    pub terminal: bool,
}

/// Replays `g` and checks every diagram and the stated result.
pub fn replay(g: &CorpusGame) -> Result<CorpusReplay, String> {
    let (positions, status, _) =
        replay_lan(Position::initial(g.variant), &g.moves).map_err(|e| format!("{}: {e}", g.id))?;
    let boards: Vec<String> = positions
        .iter()
        .map(|p| serialize_fen(p).split(' ').next().unwrap().to_string())
        .collect();
    for (ply, board) in &g.checks {
        if *ply >= boards.len() {
            return Err(format!("{}: diagram after ply {ply} beyond the game", g.id));
        }
        let window = &boards[ply.saturating_sub(DIAGRAM_SLACK)..(ply + DIAGRAM_SLACK + 1).min(boards.len())];
        if !window.contains(board) {
            return Err(format!("{}: diagram after ply {ply}: expected {board}, got {}", g.id, boards[*ply]));
        }
    }
    if status.is_terminal() && status.state != g.result {
        return Err(format!("{}: ends {:?} by {:?}, stated {:?}", g.id, status.state, status.reason, g.result));
    }
    Ok(CorpusReplay {
        plies: g.moves.len(),
        terminal: status.is_terminal(),
    })
}

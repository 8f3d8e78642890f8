//! How often the variant-specific move types are played.

use serde::Serialize;

use super::StatsError;
use crate::notation::GameRecord;
use crate::rules::{Move, MoveFlags, Reason, Variant};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpecialMove {
    /// Double push from a rank other than the home rank.
    Torpedo,
    Backward,
    Lateral,
    SelfCapture,
    EnPassant,
    /// Double push that lands on the promotion rank.
    TorpedoPromotion,
}

impl SpecialMove {
    pub const ALL: [SpecialMove; 6] = [
        SpecialMove::Torpedo,
        SpecialMove::Backward,
        SpecialMove::Lateral,
        SpecialMove::SelfCapture,
        SpecialMove::EnPassant,
        SpecialMove::TorpedoPromotion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SpecialMove::Torpedo => "torpedo",
            SpecialMove::Backward => "backward",
            SpecialMove::Lateral => "lateral",
            SpecialMove::SelfCapture => "self-capture",
            SpecialMove::EnPassant => "en-passant",
            SpecialMove::TorpedoPromotion => "torpedo-promotion",
        }
    }

    pub fn matches(self, m: &Move) -> bool {
        match self {
            SpecialMove::Torpedo => m.is_torpedo(),
            SpecialMove::Backward => m.flags.contains(MoveFlags::BACKWARD),
            SpecialMove::Lateral => m.flags.contains(MoveFlags::LATERAL),
            SpecialMove::SelfCapture => m.flags.contains(MoveFlags::SELF_CAPTURE),
            SpecialMove::EnPassant => m.flags.contains(MoveFlags::EN_PASSANT),
            SpecialMove::TorpedoPromotion => m.flags.contains(MoveFlags::DOUBLE_PUSH) && m.promotion.is_some(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FlagUsage {
    pub kind: SpecialMove,
    pub games_with: u64,
    pub plies_with: u64,
    pub game_fraction: f64,
    pub move_fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UtilizationReport {
    pub games: u64,
    pub plies: u64,
    /// Set when there were no games; every fraction is then 0.
    pub empty: bool,
    pub flags: Vec<FlagUsage>,
    /// Stalemate-win games only: decisive games and those ended by stalemate.
    pub stalemate_decisive: u64,
    pub stalemate_wins: u64,
    pub stalemate_win_fraction: f64,
}

impl UtilizationReport {
    pub fn flag(&self, kind: SpecialMove) -> &FlagUsage {
        self.flags.iter().find(|f| f.kind == kind).expect("all kinds reported")
    }

    /// Internal consistency problems; empty when the report is coherent.
    pub fn consistency_errors(&self) -> Vec<String> {
        let mut errs = Vec::new();
        for f in &self.flags {
            let name = f.kind.name();
            if f.games_with > self.games || f.plies_with > self.plies {
                errs.push(format!("{name}: count exceeds total"));
            }
            if f.games_with > f.plies_with {
                errs.push(format!("{name}: more games than special plies"));
            }
            if (f.games_with == 0) != (f.plies_with == 0) {
                errs.push(format!("{name}: game and ply counts disagree on presence"));
            }
            if f.game_fraction + 1e-12 < f.move_fraction {
                errs.push(format!("{name}: game fraction below move fraction"));
            }
        }
        if self.stalemate_wins > self.stalemate_decisive {
            errs.push("stalemate wins exceed decisive games".into());
        }
        errs
    }
}

pub fn special_move_utilization(games: &[GameRecord]) -> Result<UtilizationReport, StatsError> {
    let mut flags: Vec<FlagUsage> = SpecialMove::ALL
        .iter()
        .map(|&kind| FlagUsage {
            kind,
            games_with: 0,
            plies_with: 0,
            game_fraction: 0.0,
            move_fraction: 0.0,
        })
        .collect();
    let mut plies = 0u64;
    let (mut decisive, mut by_stalemate) = (0u64, 0u64);
    for g in games {
        plies += g.moves.len() as u64;
        for f in flags.iter_mut() {
            let n = g.moves.iter().filter(|m| f.kind.matches(m)).count() as u64;
            f.plies_with += n;
            f.games_with += u64::from(n > 0);
        }
        if g.variant == Variant::StalemateWin && g.result.state.is_decisive() {
            decisive += 1;
            by_stalemate += u64::from(g.result.reason == Reason::Stalemate);
        }
    }
    let n = games.len() as u64;
    for f in flags.iter_mut() {
        f.game_fraction = if n > 0 { f.games_with as f64 / n as f64 } else { 0.0 };
        f.move_fraction = if plies > 0 { f.plies_with as f64 / plies as f64 } else { 0.0 };
    }
    Ok(UtilizationReport {
        games: n,
        plies,
        empty: n == 0,
        flags,
        stalemate_decisive: decisive,
        stalemate_wins: by_stalemate,
        stalemate_win_fraction: if decisive > 0 { by_stalemate as f64 / decisive as f64 } else { 0.0 },
    })
}

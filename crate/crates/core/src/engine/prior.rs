use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::rules::{Color, Move, MoveFlags, PieceKind, Position};

/// Output of a prior provider, from the side to move's point of view.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    /// Aligned with the move slice given to [`PriorProvider::evaluate`].
    pub probs: Vec<f64>,
    /// In `[-1, 1]`; `-1` means the side to move has lost.
    pub value: f64,
}

/// Maps a position and its legal moves to move probabilities and a value.
///
/// `moves` is always `p.legal_moves()` in canonical order. Implementations
/// must be pure: equal inputs give equal outputs.
pub trait PriorProvider: Sync {
    fn evaluate(&self, p: &Position, moves: &[Move]) -> Evaluation;
}

impl<T: PriorProvider + ?Sized> PriorProvider for &T {
    fn evaluate(&self, p: &Position, moves: &[Move]) -> Evaluation {
        (**self).evaluate(p, moves)
    }
}

impl<T: PriorProvider + ?Sized> PriorProvider for Box<T> {
    fn evaluate(&self, p: &Position, moves: &[Move]) -> Evaluation {
        (**self).evaluate(p, moves)
    }
}

/// Value of a position with no legal moves for the side to move.
fn no_move_value(p: &Position) -> f64 {
    if p.in_check() || p.variant().stalemate_wins() {
        -1.0
    } else {
        0.0
    }
}

/// Equal probability on every legal move, value 0.
#[derive(Clone, Copy, Debug, Default)]
pub struct UniformPrior;

impl PriorProvider for UniformPrior {
    fn evaluate(&self, p: &Position, moves: &[Move]) -> Evaluation {
        if moves.is_empty() {
            return Evaluation {
                probs: Vec::new(),
                value: no_move_value(p),
            };
        }
        let q = 1.0 / moves.len() as f64;
        Evaluation {
            probs: vec![q; moves.len()],
            value: 0.0,
        }
    }
}

/// Softmax over one-ply material gain; value is `tanh(k * material lead)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaterialPrior {
    /// Pawn, knight, bishop, rook, queen.
    pub weights: [f64; 5],
    /// Inverse temperature of the move softmax.
    pub beta: f64,
    /// Scale inside the value `tanh`.
    pub k: f64,
}

impl Default for MaterialPrior {
    fn default() -> Self {
        MaterialPrior {
            weights: [1.0, 3.0, 3.0, 5.0, 9.0],
            beta: 1.0,
            k: 0.2,
        }
    }
}

impl MaterialPrior {
    fn value_of(&self, kind: PieceKind) -> f64 {
        match kind {
            PieceKind::King => 0.0,
            k => self.weights[k.index()],
        }
    }

    /// Material of `color` minus its opponent's.
    pub fn material_diff(&self, p: &Position, color: Color) -> f64 {
        PieceKind::ALL
            .iter()
            .map(|&k| self.value_of(k) * (p.count(color, k) as f64 - p.count(color.opposite(), k) as f64))
            .sum()
    }

    /// Immediate material change for the mover.
    pub fn gain(&self, p: &Position, m: &Move) -> f64 {
        let mut g = 0.0;
        if m.flags.contains(MoveFlags::EN_PASSANT) {
            g += self.value_of(PieceKind::Pawn);
        } else if let Some(victim) = p.piece_at(m.to) {
            let v = self.value_of(victim.kind);
            g += if victim.color == p.side_to_move() { -v } else { v };
        }
        if let Some(promo) = m.promotion {
            g += self.value_of(promo) - self.value_of(PieceKind::Pawn);
        }
        g
    }
}

impl PriorProvider for MaterialPrior {
    fn evaluate(&self, p: &Position, moves: &[Move]) -> Evaluation {
        if moves.is_empty() {
            return Evaluation {
                probs: Vec::new(),
                value: no_move_value(p),
            };
        }
        let logits: Vec<f64> = moves.iter().map(|m| self.beta * self.gain(p, m)).collect();
        let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let exps: Vec<f64> = logits.iter().map(|l| (l - max).exp()).collect();
        let z: f64 = exps.iter().sum();
        Evaluation {
            probs: exps.into_iter().map(|e| e / z).collect(),
            value: (self.k * self.material_diff(p, p.side_to_move())).tanh(),
        }
    }
}

/// Named provider selectable from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProviderSpec {
    Uniform,
    Material(MaterialPrior),
}

impl PriorProvider for ProviderSpec {
    fn evaluate(&self, p: &Position, moves: &[Move]) -> Evaluation {
        match self {
            ProviderSpec::Uniform => UniformPrior.evaluate(p, moves),
            ProviderSpec::Material(m) => m.evaluate(p, moves),
        }
    }
}

impl fmt::Display for ProviderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProviderSpec::Uniform => f.write_str("uniform"),
            ProviderSpec::Material(_) => f.write_str("material"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("unknown prior '{0}' (expected uniform or material)")]
pub struct UnknownProvider(pub String);

impl FromStr for ProviderSpec {
    type Err = UnknownProvider;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(ProviderSpec::Uniform),
            "material" => Ok(ProviderSpec::Material(MaterialPrior::default())),
            other => Err(UnknownProvider(other.to_string())),
        }
    }
}

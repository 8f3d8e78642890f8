//! Material regression: fit `g_w(s) = tanh(w . d(s))` to game outcomes by
//! least squares, where `d = [1, dP, dN, dB, dR, dQ]` counts the side to
//! move's material minus the opponent's.

use std::collections::BTreeMap;

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::StatsError;
use crate::notation::GameRecord;
use crate::rules::{Outcome, PieceKind, Position};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainingSample {
    pub d: [f64; 6],
    /// Final result for the side to move: 1, 0 or -1.
    pub z: f64,
}

pub fn material_features(p: &Position) -> [f64; 6] {
    let us = p.side_to_move();
    let mut d = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
    for (i, k) in [PieceKind::Pawn, PieceKind::Knight, PieceKind::Bishop, PieceKind::Rook, PieceKind::Queen]
        .into_iter()
        .enumerate()
    {
        d[i + 1] = p.count(us, k) as f64 - p.count(us.opposite(), k) as f64;
    }
    d
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleMode {
    /// Every qualifying position of every game.
    AllPositions,
    /// One qualifying position per game, drawn with the given seed.
    OnePerGame { seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositionFilter {
    /// Positions with fewer plies played are skipped.
    pub min_ply: usize,
    pub mode: SampleMode,
}

impl Default for PositionFilter {
    fn default() -> Self {
        PositionFilter {
            min_ply: 20,
            mode: SampleMode::AllPositions,
        }
    }
}

/// Labeled positions from replayed games. Capped games count as draws.
pub fn extract_training_samples(games: &[GameRecord], filter: &PositionFilter) -> Result<Vec<TrainingSample>, StatsError> {
    let mut out = Vec::new();
    let mut rng = match filter.mode {
        SampleMode::OnePerGame { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        SampleMode::AllPositions => None,
    };
    for (index, g) in games.iter().enumerate() {
        if g.result.state == Outcome::Ongoing {
            return Err(StatsError::UnfinishedGame { index });
        }
        let replay = g.replay()?;
        let eligible: Vec<&Position> = replay.positions.iter().skip(filter.min_ply).collect();
        let label = |p: &Position| g.result.state.score_for(p.side_to_move()) as f64;
        match rng.as_mut() {
            None => out.extend(eligible.iter().map(|p| TrainingSample {
                d: material_features(p),
                z: label(p),
            })),
            Some(rng) => {
                if let Some(p) = eligible.choose(rng) {
                    out.push(TrainingSample {
                        d: material_features(p),
                        z: label(p),
                    });
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub max_iterations: usize,
    pub gradient_tolerance: f64,
    /// Sufficient-decrease constant of the backtracking line search.
    pub armijo: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            max_iterations: 10_000,
            gradient_tolerance: 1e-8,
            armijo: 1e-4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PieceValueModel {
    /// Bias, pawn, knight, bishop, rook, queen.
    pub weights: [f64; 6],
    /// Knight, bishop, rook and queen in pawns.
    pub normalized: [f64; 4],
    pub final_loss: f64,
    pub iterations: usize,
    pub converged: bool,
    pub samples: usize,
}

fn dot(a: &[f64; 6], b: &[f64; 6]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Mean squared error and its gradient at `w`.
pub fn loss_and_grad(samples: &[TrainingSample], w: &[f64; 6]) -> (f64, [f64; 6]) {
    weighted_loss_and_grad(samples.iter().map(|s| (s, 1.0)), samples.len() as f64, w)
}

fn weighted_loss_and_grad<'a>(
    groups: impl Iterator<Item = (&'a TrainingSample, f64)>,
    n: f64,
    w: &[f64; 6],
) -> (f64, [f64; 6]) {
    let mut loss = 0.0;
    let mut grad = [0.0; 6];
    for (s, weight) in groups {
        let g = dot(w, &s.d).tanh();
        let r = g - s.z;
        loss += weight * r * r;
        let c = weight * 2.0 * r * (1.0 - g * g);
        for (gi, di) in grad.iter_mut().zip(&s.d) {
            *gi += c * di;
        }
    }
    (loss / n, grad.map(|g| g / n))
}

/// Identical samples merged into one entry with a multiplicity.
fn collapse(samples: &[TrainingSample]) -> Vec<(TrainingSample, f64)> {
    let mut groups: BTreeMap<[u64; 7], (TrainingSample, f64)> = BTreeMap::new();
    for s in samples {
        let mut key = [0u64; 7];
        for (k, x) in key.iter_mut().zip(s.d.iter().chain([&s.z])) {
            *k = x.to_bits();
        }
        groups.entry(key).or_insert((*s, 0.0)).1 += 1.0;
    }
    groups.into_values().collect()
}

/// Gradient descent with backtracking line search from `w = 0`.
pub fn fit_samples(samples: &[TrainingSample], opt: &OptimizerConfig) -> Result<PieceValueModel, StatsError> {
    if samples.iter().all(|s| s.d[1..].iter().all(|&x| x == 0.0)) {
        return Err(StatsError::DegenerateData);
    }
    let groups = collapse(samples);
    let n = samples.len() as f64;
    let eval = |w: &[f64; 6]| weighted_loss_and_grad(groups.iter().map(|(s, k)| (s, *k)), n, w);
    let mut w = [0.0; 6];
    let (mut loss, mut grad) = eval(&w);
    let mut step = 1.0;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opt.max_iterations {
        let gnorm2 = dot(&grad, &grad);
        if gnorm2.sqrt() < opt.gradient_tolerance {
            converged = true;
            break;
        }
        iterations += 1;
        let mut accepted = false;
        // Try a larger step first, then halve until the decrease is sufficient.
        step *= 2.0;
        for _ in 0..60 {
            let trial: [f64; 6] = std::array::from_fn(|i| w[i] - step * grad[i]);
            let (l, g) = eval(&trial);
            if l <= loss - opt.armijo * step * gnorm2 {
                w = trial;
                loss = l;
                grad = g;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            // No descent at machine precision: a stationary point for practical purposes.
            converged = true;
            break;
        }
    }
    let pawn = w[1];
    if pawn <= 0.0 || !pawn.is_finite() {
        return Err(StatsError::NonPositivePawn { pawn, weights: w });
    }
    Ok(PieceValueModel {
        weights: w,
        normalized: [w[2] / pawn, w[3] / pawn, w[4] / pawn, w[5] / pawn],
        final_loss: loss,
        iterations,
        converged,
        samples: samples.len(),
    })
}

pub fn fit_piece_values(
    games: &[GameRecord],
    filter: &PositionFilter,
    opt: &OptimizerConfig,
) -> Result<PieceValueModel, StatsError> {
    fit_samples(&extract_training_samples(games, filter)?, opt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::parse_fen;

    #[test]
    fn features_are_side_relative() {
        let p = parse_fen("4k3/8/8/8/8/8/PP6/RN2K3 w - - 0 1").unwrap();
        assert_eq!(material_features(&p), [1.0, 2.0, 1.0, 0.0, 1.0, 0.0]);
        let p = parse_fen("4k3/8/8/8/8/8/PP6/RN2K3 b - - 0 1").unwrap();
        assert_eq!(material_features(&p), [1.0, -2.0, -1.0, 0.0, -1.0, 0.0]);
    }

    #[test]
    fn degenerate_and_all_draw() {
        let zero = vec![TrainingSample { d: [1.0, 0.0, 0.0, 0.0, 0.0, 0.0], z: 1.0 }; 4];
        assert!(matches!(fit_samples(&zero, &OptimizerConfig::default()), Err(StatsError::DegenerateData)));
        let draws: Vec<_> = (0..20)
            .map(|i| TrainingSample {
                d: [1.0, (i % 5) as f64 - 2.0, (i % 3) as f64 - 1.0, 0.0, 0.0, 0.0],
                z: 0.0,
            })
            .collect();
        assert!(matches!(fit_samples(&draws, &OptimizerConfig::default()), Err(StatsError::NonPositivePawn { .. })));
    }
}

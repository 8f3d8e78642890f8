//! Estimators for comparing variants: outcome posteriors, opening-tree
//! entropy, relative entropy, combined-prior candidates, move utilization,
//! game lengths and material regression.

pub mod candidates;
pub mod diversity;
pub mod kl;
pub mod lengths;
pub mod outcomes;
pub mod piece_values;
pub mod sequence;
pub mod utilization;

pub use candidates::{additional_candidates, combined_prior, AdditionalCandidatesCurve, BoundCheck};
pub use diversity::{diversity_curve, entropy, exact_diversity, position_entropy, DiversityCurve, PlyStats};
pub use kl::{exact_kl, kl_divergence, KlEstimate};
pub use lengths::{game_length_histogram, LengthHistogram};
pub use outcomes::{
    count_outcomes, draw_rate_comparison, empirical_expected_score, expected_score_comparison, Comparison,
    OutcomeCounts, OutcomePosterior,
};
pub use piece_values::{
    extract_training_samples, fit_piece_values, fit_samples, loss_and_grad, material_features, OptimizerConfig,
    PieceValueModel, PositionFilter, SampleMode, TrainingSample,
};
pub use sequence::{ChessProcess, ChessReference, FixedBranching, Process, Reference};
pub use utilization::{special_move_utilization, FlagUsage, SpecialMove, UtilizationReport};

use crate::notation::NotationError;

#[derive(Debug, thiserror::Error)]
pub enum StatsError {
    #[error("game {index} has no final result")]
    UnfinishedGame { index: usize },
    #[error("no games to score")]
    EmptyCounts,
    #[error("reference gives no support to move {action} at state {state}")]
    SupportViolation { state: String, action: String },
    #[error("cannot align move distributions: {0}")]
    SupportMismatch(String),
    #[error("position has no legal moves")]
    Terminal,
    #[error("every material difference is zero")]
    DegenerateData,
    #[error("fitted pawn weight {pawn} is not positive")]
    NonPositivePawn { pawn: f64, weights: [f64; 6] },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Notation(#[from] NotationError),
}

/// Running mean and variance (Welford).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Accumulator {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Accumulator {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Sample variance; 0 with fewer than two points.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            (self.variance() / self.n as f64).sqrt()
        }
    }
}

//! Chess-variant laboratory: rules for Classical chess and nine rule
//! alterations, PUCT self-play over pluggable priors, and the statistics used
//! to compare variants (outcome posteriors, opening-tree entropy, relative
//! entropy between variants, candidate-move analysis, piece-value fits).

pub mod cli;
pub mod engine;
pub mod notation;
pub mod rules;
pub mod stats;

pub use rules::{Color, GameStatus, Move, Outcome, Piece, PieceKind, Position, Reason, Square, Variant};

/// Crate version recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

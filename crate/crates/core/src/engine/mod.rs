//! Self-play over pluggable priors with PUCT tree search.

pub mod prior;
pub mod search;
pub mod selfplay;

pub use crate::notation::{ChosenBy, GameRecord, PlyInfo};
pub use prior::{Evaluation, MaterialPrior, PriorProvider, ProviderSpec, UniformPrior};
pub use search::{search, EdgeStats, SearchConfig, SearchResult, SearchTree};
pub use selfplay::{game_seed, generate_set, play_game, sample_softmax, SetOptions};

use crate::notation::NotationError;

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error("search requested in a position without legal moves")]
    NoLegalMoves,
    #[error("bad start position: {0}")]
    BadStart(NotationError),
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
}

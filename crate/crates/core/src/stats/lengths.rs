use serde::Serialize;

use super::StatsError;
use crate::notation::GameRecord;

/// Games per `[i * width, (i + 1) * width)` ply bucket.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LengthHistogram {
    pub width: usize,
    pub all: Vec<u64>,
    pub decisive: Vec<u64>,
}

impl LengthHistogram {
    pub fn bucket_start(&self, i: usize) -> usize {
        i * self.width
    }
}

pub fn game_length_histogram(games: &[GameRecord], width: usize) -> Result<LengthHistogram, StatsError> {
    if width == 0 {
        return Err(StatsError::InvalidArgument("bucket width must be at least 1".into()));
    }
    let buckets = games.iter().map(|g| g.moves.len() / width + 1).max().unwrap_or(0);
    let mut all = vec![0; buckets];
    let mut decisive = vec![0; buckets];
    for g in games {
        let b = g.moves.len() / width;
        all[b] += 1;
        if g.result.state.is_decisive() {
            decisive[b] += 1;
        }
    }
    Ok(LengthHistogram { width, all, decisive })
}

use std::sync::atomic::{AtomicUsize, Ordering};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::prior::PriorProvider;
use super::search::{argmax_first, SearchConfig, SearchTree};
use super::EngineError;
use crate::notation::{parse_fen_for, serialize_fen, ChosenBy, GameRecord, PlyInfo};
use crate::rules::{repetition_key, status_with_moves, GameStatus, Outcome, Position, Reason, Variant};

/// Index drawn with probability proportional to `exp(N_i - max N)`.
pub fn sample_softmax<R: Rng + ?Sized>(visits: &[u32], rng: &mut R) -> usize {
    let max = visits.iter().copied().max().unwrap_or(0);
    let weights: Vec<f64> = visits.iter().map(|&n| (n as f64 - max as f64).exp()).collect();
    let total: f64 = weights.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        if u < *w {
            return i;
        }
        u -= w;
    }
    // Rounding left `u` past the last bucket; the last positive weight wins.
    weights.iter().rposition(|w| *w > 0.0).unwrap_or(0)
}

/// Plays one game. `cfg.seed` fully determines it.
pub fn play_game<P: PriorProvider + ?Sized>(
    variant: Variant,
    prior: &P,
    cfg: &SearchConfig,
    start_fen: Option<&str>,
    record_plies: bool,
) -> Result<GameRecord, EngineError> {
    cfg.validate()?;
    let start = match start_fen {
        Some(text) => parse_fen_for(text, variant).map_err(EngineError::BadStart)?,
        None => Position::initial(variant),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut tree = SearchTree::new();
    let mut history = Vec::new();
    let mut moves = Vec::new();
    let mut per_ply = Vec::new();
    let mut legal = Vec::new();
    let mut p = start;
    let (result, capped) = loop {
        p.legal_moves_into(&mut legal);
        let st = status_with_moves(&p, &legal, &history);
        if st.is_terminal() {
            break (st, false);
        }
        if moves.len() >= cfg.max_game_plies as usize {
            let capped = GameStatus {
                state: Outcome::Draw,
                reason: Reason::None,
            };
            break (capped, true);
        }
        let res = tree.search(&p, &history, prior, cfg, true, &mut rng)?;
        let (idx, chosen_by) = if (moves.len() as u32) < cfg.softmax_plies {
            (sample_softmax(&res.visits, &mut rng), ChosenBy::Softmax)
        } else {
            (argmax_first(&res.visits), ChosenBy::Argmax)
        };
        let m = res.moves[idx];
        if record_plies {
            per_ply.push(PlyInfo {
                visits: res.visits,
                chosen_by,
            });
        }
        history.push(repetition_key(&p));
        moves.push(m);
        p = p.make_move(&m);
    };
    Ok(GameRecord {
        variant,
        start_fen: serialize_fen(&start),
        moves,
        result,
        capped,
        per_ply: record_plies.then_some(per_ply),
        seed: cfg.seed,
    })
}

/// Seed of game `index` in a set generated from `base`.
pub fn game_seed(base: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(index);
    rng.next_u64()
}

/// Options for [`generate_set`] beyond the search configuration.
#[derive(Clone, Debug, Default)]
pub struct SetOptions {
    /// Start positions cycled through by game index.
    pub opening_fens: Vec<String>,
    /// Worker threads; `0` means rayon's default.
    pub threads: usize,
    pub record_plies: bool,
}

/// Plays `count` games. Game `i` uses seed `game_seed(cfg.seed, i)` and
/// opening `i mod len`. Output order is by index, whatever the scheduling.
pub fn generate_set<P: PriorProvider + ?Sized>(
    variant: Variant,
    prior: &P,
    cfg: &SearchConfig,
    count: usize,
    opts: &SetOptions,
    progress: Option<&(dyn Fn(usize, usize) + Sync)>,
) -> Result<Vec<GameRecord>, EngineError> {
    if count == 0 {
        return Err(EngineError::InvalidConfig("game count must be at least 1".into()));
    }
    cfg.validate()?;
    for fen in &opts.opening_fens {
        parse_fen_for(fen, variant).map_err(EngineError::BadStart)?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads)
        .build()
        .map_err(|e| EngineError::InvalidConfig(format!("thread pool: {e}")))?;
    let done = AtomicUsize::new(0);
    pool.install(|| {
        (0..count)
            .into_par_iter()
            .map(|i| {
                let mut game_cfg = *cfg;
                game_cfg.seed = game_seed(cfg.seed, i as u64);
                let fen = (!opts.opening_fens.is_empty()).then(|| opts.opening_fens[i % opts.opening_fens.len()].as_str());
                let rec = play_game(variant, prior, &game_cfg, fen, opts.record_plies);
                let n = done.fetch_add(1, Ordering::Relaxed) + 1;
                if let Some(cb) = progress {
                    cb(n, count);
                }
                rec
            })
            .collect()
    })
}

//! Opening-tree entropy `H(t)` and average candidate count `M(t)`.
//!
//! Ply `t` is the `t`-th move: `H(t)` is the entropy of the first `t` moves
//! and `M(t)` averages `m(s) = exp(H(s))` over the states from which the
//! `t`-th move is chosen. Sequences that end before ply `t` do not
//! contribute to that ply; the per-ply sample count is reported.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::sequence::{pick, Process};
use super::{Accumulator, StatsError};
use crate::engine::PriorProvider;
use crate::rules::Position;

/// `-sum p ln p` with `0 ln 0 = 0`.
pub fn entropy(probs: &[f64]) -> f64 {
    -probs.iter().filter(|&&p| p > 0.0).map(|&p| p * p.ln()).sum::<f64>()
}

/// Entropy (nats) of a prior at a position and its candidate count `exp(H)`.
pub fn position_entropy(prior: &dyn PriorProvider, p: &Position) -> Result<(f64, f64), StatsError> {
    let moves = p.legal_moves();
    if moves.is_empty() {
        return Err(StatsError::Terminal);
    }
    let h = entropy(&prior.evaluate(p, &moves).probs);
    Ok((h, h.exp()))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct PlyStats {
    pub ply: u32,
    pub samples: u64,
    pub entropy: f64,
    pub entropy_se: f64,
    pub candidates: f64,
    pub candidates_se: f64,
    /// Mean number of available moves at the states behind `candidates`.
    pub branching: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiversityCurve {
    pub plies: Vec<PlyStats>,
    pub sequences: u64,
}

impl DiversityCurve {
    /// `M(t) / sqrt(mean branching)`, a diagnostic only.
    pub fn sqrt_ratio(&self) -> Vec<f64> {
        self.plies.iter().map(|s| s.candidates / s.branching.sqrt()).collect()
    }
}

/// Monte Carlo estimate from `samples` ancestrally sampled sequences.
pub fn diversity_curve<P: Process>(process: &P, max_ply: u32, samples: u64, seed: u64) -> Result<DiversityCurve, StatsError> {
    if max_ply == 0 || samples == 0 {
        return Err(StatsError::InvalidArgument("plies and samples must be at least 1".into()));
    }
    let t_max = max_ply as usize;
    let mut h = vec![Accumulator::default(); t_max];
    let mut m = vec![Accumulator::default(); t_max];
    let mut b = vec![Accumulator::default(); t_max];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let mut s = process.root();
        let mut neg_log_p = 0.0;
        for t in 0..t_max {
            let dist = process.policy(&s);
            if dist.is_empty() {
                break;
            }
            let probs: Vec<f64> = dist.iter().map(|(_, p)| *p).collect();
            m[t].push(entropy(&probs).exp());
            b[t].push(dist.len() as f64);
            let (a, p) = pick(&dist, rng.random());
            neg_log_p -= p.ln();
            h[t].push(neg_log_p);
            s = process.step(&s, &a);
        }
    }
    let plies = (0..t_max)
        .map(|t| PlyStats {
            ply: t as u32 + 1,
            samples: h[t].count(),
            entropy: h[t].mean(),
            entropy_se: h[t].std_error(),
            candidates: m[t].mean(),
            candidates_se: m[t].std_error(),
            branching: b[t].mean(),
        })
        .collect();
    Ok(DiversityCurve { plies, sequences: samples })
}

/// Exact `H(t)` and `M(t)` by walking every sequence with positive
/// probability; standard errors are zero and `samples` holds path counts.
pub fn exact_diversity<P: Process>(process: &P, max_ply: u32) -> DiversityCurve {
    let t_max = max_ply as usize;
    // Per ply: probability mass reaching it, sum p * (-ln p), sum p * m, sum p * branching, paths.
    let mut acc = vec![[0.0f64; 4]; t_max];
    let mut paths = vec![0u64; t_max];
    fn walk<P: Process>(
        process: &P,
        s: &P::State,
        t: usize,
        log_p: f64,
        acc: &mut [[f64; 4]],
        paths: &mut [u64],
    ) {
        if t == acc.len() {
            return;
        }
        let dist = process.policy(s);
        if dist.is_empty() {
            return;
        }
        let probs: Vec<f64> = dist.iter().map(|(_, p)| *p).collect();
        let reach = log_p.exp();
        acc[t][2] += reach * entropy(&probs).exp();
        acc[t][3] += reach * dist.len() as f64;
        for (a, p) in dist {
            if p <= 0.0 {
                continue;
            }
            let lp = log_p + p.ln();
            let mass = lp.exp();
            acc[t][0] += mass;
            acc[t][1] -= mass * lp;
            paths[t] += 1;
            walk(process, &process.step(s, &a), t + 1, lp, acc, paths);
        }
    }
    walk(process, &process.root(), 0, 0.0, &mut acc, &mut paths);
    let plies = (0..t_max)
        .map(|t| {
            let [mass, h, m, b] = acc[t];
            let norm = |x: f64| if mass > 0.0 { x / mass } else { 0.0 };
            PlyStats {
                ply: t as u32 + 1,
                samples: paths[t],
                entropy: norm(h),
                entropy_se: 0.0,
                candidates: norm(m),
                candidates_se: 0.0,
                branching: norm(b),
            }
        })
        .collect();
    DiversityCurve { plies, sequences: 0 }
}

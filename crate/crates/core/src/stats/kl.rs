//! Relative entropy of the sequence distribution of `p` with respect to `q`,
//! `E_p[ln p(s) - ln q(s)]` over sequences of at most `T` moves.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::sequence::{pick, Process, Reference};
use super::{Accumulator, StatsError};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KlEstimate {
    pub nats: f64,
    pub std_error: f64,
    pub samples: u64,
    /// Per ply `t`: relative entropy of the sequences cut after `t` moves
    /// (a sequence that ended earlier keeps its full log-ratio), its
    /// standard error, and the number of sequences (or, in exact mode,
    /// paths) that reached `t`.
    pub per_ply: Vec<(u32, f64, f64, u64)>,
}

/// `q`'s probabilities for the moves `p` supports at `s`, or the first move
/// `q` cannot produce.
fn aligned_q<P: Process, Q: Reference<P>>(
    process: &P,
    reference: &Q,
    s: &P::State,
    dist: &[(P::Action, f64)],
) -> Result<HashMap<P::Action, f64>, StatsError>
where
    P::Action: std::hash::Hash,
{
    let q: HashMap<P::Action, f64> = reference.policy(s).into_iter().collect();
    for (a, p) in dist {
        if *p > 0.0 && q.get(a).is_none_or(|&x| x <= 0.0) {
            return Err(StatsError::SupportViolation {
                state: process.describe(s),
                action: a.to_string(),
            });
        }
    }
    Ok(q)
}

/// Monte Carlo estimate from `samples` sequences drawn from `p`.
pub fn kl_divergence<P, Q>(process: &P, reference: &Q, max_ply: u32, samples: u64, seed: u64) -> Result<KlEstimate, StatsError>
where
    P: Process,
    P::Action: std::hash::Hash,
    Q: Reference<P>,
{
    if max_ply == 0 || samples == 0 {
        return Err(StatsError::InvalidArgument("plies and samples must be at least 1".into()));
    }
    let mut total = Accumulator::default();
    let mut per_ply = vec![Accumulator::default(); max_ply as usize];
    let mut reached = vec![0u64; max_ply as usize];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let mut s = process.root();
        let mut log_ratio = 0.0;
        let mut ended = false;
        for (acc, reached) in per_ply.iter_mut().zip(reached.iter_mut()) {
            if !ended {
                let dist = process.policy(&s);
                if dist.is_empty() {
                    ended = true;
                } else {
                    let q = aligned_q(process, reference, &s, &dist)?;
                    let (a, p) = pick(&dist, rng.random());
                    log_ratio += p.ln() - q[&a].ln();
                    s = process.step(&s, &a);
                    *reached += 1;
                }
            }
            acc.push(log_ratio);
        }
        total.push(log_ratio);
    }
    Ok(KlEstimate {
        nats: total.mean(),
        std_error: total.std_error(),
        samples,
        per_ply: per_ply
            .iter()
            .enumerate()
            .map(|(t, a)| (t as u32 + 1, a.mean(), a.std_error(), reached[t]))
            .collect(),
    })
}

/// Exact value by the chain rule over every reachable state.
pub fn exact_kl<P, Q>(process: &P, reference: &Q, max_ply: u32) -> Result<KlEstimate, StatsError>
where
    P: Process,
    P::Action: std::hash::Hash,
    Q: Reference<P>,
{
    // Per ply: sum of reach * local relative entropy, and paths reaching it.
    let mut local = vec![(0.0f64, 0u64); max_ply as usize];
    fn walk<P, Q>(
        process: &P,
        reference: &Q,
        s: &P::State,
        t: usize,
        reach: f64,
        local: &mut [(f64, u64)],
    ) -> Result<(), StatsError>
    where
        P: Process,
        P::Action: std::hash::Hash,
        Q: Reference<P>,
    {
        if t == local.len() {
            return Ok(());
        }
        let dist = process.policy(s);
        if dist.is_empty() {
            return Ok(());
        }
        let q = aligned_q(process, reference, s, &dist)?;
        let kl: f64 = dist
            .iter()
            .filter(|(_, p)| *p > 0.0)
            .map(|(a, p)| p * (p.ln() - q[a].ln()))
            .sum();
        local[t].0 += reach * kl;
        for (a, p) in &dist {
            if *p > 0.0 {
                local[t].1 += 1;
                walk(process, reference, &process.step(s, a), t + 1, reach * p, local)?;
            }
        }
        Ok(())
    }
    walk(process, reference, &process.root(), 0, 1.0, &mut local)?;
    let mut cumulative = 0.0;
    let per_ply = local
        .iter()
        .enumerate()
        .map(|(t, &(kl, paths))| {
            cumulative += kl;
            (t as u32 + 1, cumulative, 0.0, paths)
        })
        .collect();
    Ok(KlEstimate {
        nats: cumulative,
        std_error: 0.0,
        samples: 0,
        per_ply,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::sequence::FixedBranching;

    #[test]
    fn two_point_closed_form() {
        let p = FixedBranching::uniform(2, 1);
        let q = FixedBranching {
            probs: vec![0.9, 0.1],
            depth: 1,
        };
        let want = 0.5 * (0.5f64 / 0.9).ln() + 0.5 * (0.5f64 / 0.1).ln();
        let got = exact_kl(&p, &q, 1).unwrap();
        assert!((got.nats - want).abs() < 1e-12);
        assert!((want - 0.5108).abs() < 1e-4);
        let same = exact_kl(&p, &p, 1).unwrap();
        assert_eq!(same.nats, 0.0);
    }

    #[test]
    fn missing_support_is_reported() {
        let p = FixedBranching::uniform(3, 2);
        let q = FixedBranching {
            probs: vec![0.5, 0.5],
            depth: 2,
        };
        assert!(matches!(exact_kl(&p, &q, 2), Err(StatsError::SupportViolation { .. })));
        assert!(matches!(kl_divergence(&p, &q, 2, 10, 0), Err(StatsError::SupportViolation { .. })));
    }
}

//! Combined prior `r = max(p, q) / sum max(p, q)` and the extra candidate
//! moves it asks of `q`: `additional = m_r - m_q` with `m_x = exp(H(x))`.
//! The bound `m_r <= m_p + m_q` is checked at every state and violations are
//! counted. It can fail when `p` and `q` share a dominant move and spread the
//! rest over disjoint long tails.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::diversity::entropy;
use super::sequence::{pick, Process, Reference};
use super::{Accumulator, StatsError};

/// Relative slack allowed on the bound for floating-point rounding.
pub const BOUND_RTOL: f64 = 1e-12;

fn check_distribution(x: &[f64], name: &str) -> Result<(), StatsError> {
    if x.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(StatsError::SupportMismatch(format!("{name} has a negative or non-finite entry")));
    }
    let s: f64 = x.iter().sum();
    if (s - 1.0).abs() > 1e-9 {
        return Err(StatsError::SupportMismatch(format!("{name} sums to {s}")));
    }
    Ok(())
}

/// Normalized elementwise maximum of two distributions on the same support.
pub fn combined_prior(p: &[f64], q: &[f64]) -> Result<Vec<f64>, StatsError> {
    if p.len() != q.len() {
        return Err(StatsError::SupportMismatch(format!("lengths {} and {}", p.len(), q.len())));
    }
    check_distribution(p, "p")?;
    check_distribution(q, "q")?;
    let r: Vec<f64> = p.iter().zip(q).map(|(a, b)| a.max(*b)).collect();
    let z: f64 = r.iter().sum();
    Ok(r.into_iter().map(|x| x / z).collect())
}

/// Candidate counts at one state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub m_p: f64,
    pub m_q: f64,
    pub m_r: f64,
}

impl BoundCheck {
    pub fn new(p: &[f64], q: &[f64]) -> Result<BoundCheck, StatsError> {
        let r = combined_prior(p, q)?;
        Ok(BoundCheck {
            m_p: entropy(p).exp(),
            m_q: entropy(q).exp(),
            m_r: entropy(&r).exp(),
        })
    }

    pub fn additional(&self) -> f64 {
        self.m_r - self.m_q
    }

    /// `m_r - (m_p + m_q)`; positive when the bound is violated.
    pub fn excess(&self) -> f64 {
        self.m_r - (self.m_p + self.m_q)
    }

    pub fn holds(&self) -> bool {
        self.m_r <= (self.m_p + self.m_q) * (1.0 + BOUND_RTOL) && self.additional() <= self.m_p * (1.0 + BOUND_RTOL)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdditionalCandidatesCurve {
    /// Per ply `t`: mean of `additional` at the state the `t`-th move is
    /// chosen from, its standard error, and the number of states.
    pub per_ply: Vec<(u32, f64, f64, u64)>,
    pub states_checked: u64,
    pub violations: u64,
    /// Largest observed `m_r - (m_p + m_q)`.
    pub max_excess: f64,
    pub sequences: u64,
}

/// Aligns `p` and `q` by action, padding each side's missing moves with zero.
fn align<A: Copy + Ord>(p: &[(A, f64)], q: &[(A, f64)]) -> Result<(Vec<f64>, Vec<f64>), StatsError> {
    let mut union: BTreeMap<A, (f64, f64)> = BTreeMap::new();
    for &(a, x) in p {
        if union.insert(a, (x, 0.0)).is_some() {
            return Err(StatsError::SupportMismatch("p lists a move twice".into()));
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    for &(a, x) in q {
        if !seen.insert(a) {
            return Err(StatsError::SupportMismatch("q lists a move twice".into()));
        }
        union.entry(a).or_insert((0.0, 0.0)).1 = x;
    }
    Ok(union.values().copied().unzip())
}

/// Samples sequences from `p` and measures, at every visited state, how many
/// more candidates the combined prior has than `q`.
pub fn additional_candidates<P, Q>(
    process: &P,
    reference: &Q,
    max_ply: u32,
    samples: u64,
    seed: u64,
) -> Result<AdditionalCandidatesCurve, StatsError>
where
    P: Process,
    Q: Reference<P>,
{
    if max_ply == 0 || samples == 0 {
        return Err(StatsError::InvalidArgument("plies and samples must be at least 1".into()));
    }
    let mut acc = vec![Accumulator::default(); max_ply as usize];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut states, mut violations, mut max_excess) = (0u64, 0u64, f64::NEG_INFINITY);
    for _ in 0..samples {
        let mut s = process.root();
        for a_t in acc.iter_mut() {
            let dist = process.policy(&s);
            if dist.is_empty() {
                break;
            }
            let (p, q) = align(&dist, &reference.policy(&s))?;
            let check = BoundCheck::new(&p, &q)?;
            states += 1;
            if !check.holds() {
                violations += 1;
            }
            max_excess = max_excess.max(check.excess());
            a_t.push(check.additional());
            let (a, _) = pick(&dist, rng.random());
            s = process.step(&s, &a);
        }
    }
    Ok(AdditionalCandidatesCurve {
        per_ply: acc
            .iter()
            .enumerate()
            .map(|(t, a)| (t as u32 + 1, a.mean(), a.std_error(), a.count()))
            .collect(),
        states_checked: states,
        violations,
        max_excess,
        sequences: samples,
    })
}

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Dirichlet, Distribution};
use serde::{Deserialize, Serialize};

use super::StatsError;
use crate::notation::GameRecord;
use crate::rules::Outcome;

/// Game results from White's point of view.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeCounts {
    pub n_win: u64,
    pub n_draw: u64,
    pub n_lose: u64,
}

impl OutcomeCounts {
    pub fn new(n_win: u64, n_draw: u64, n_lose: u64) -> OutcomeCounts {
        OutcomeCounts { n_win, n_draw, n_lose }
    }

    pub fn total(&self) -> u64 {
        self.n_win + self.n_draw + self.n_lose
    }

    pub fn posterior(&self) -> OutcomePosterior {
        OutcomePosterior {
            params: [self.n_win as f64 + 1.0, self.n_draw as f64 + 1.0, self.n_lose as f64 + 1.0],
        }
    }
}

/// Dirichlet posterior over (win, draw, loss) rates under a flat prior.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutcomePosterior {
    pub params: [f64; 3],
}

impl OutcomePosterior {
    pub fn mean(&self) -> [f64; 3] {
        let s: f64 = self.params.iter().sum();
        self.params.map(|a| a / s)
    }

    fn dirichlet(&self) -> Dirichlet<f64, 3> {
        Dirichlet::new(self.params).expect("parameters are at least 1")
    }
}

/// Counts results; capped games count as draws.
pub fn count_outcomes<'a>(games: impl IntoIterator<Item = &'a GameRecord>) -> Result<OutcomeCounts, StatsError> {
    let mut c = OutcomeCounts::default();
    for (index, g) in games.into_iter().enumerate() {
        match g.result.state {
            Outcome::WhiteWins => c.n_win += 1,
            Outcome::Draw => c.n_draw += 1,
            Outcome::BlackWins => c.n_lose += 1,
            Outcome::Ongoing => return Err(StatsError::UnfinishedGame { index }),
        }
    }
    Ok(c)
}

/// Monte Carlo probability with its binomial standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub probability: f64,
    pub std_error: f64,
    pub samples: u64,
}

fn compare(
    a: &OutcomeCounts,
    b: &OutcomeCounts,
    samples: u64,
    seed: u64,
    hit: impl Fn(&[f64; 3], &[f64; 3]) -> bool,
) -> Result<Comparison, StatsError> {
    if samples == 0 {
        return Err(StatsError::InvalidArgument("samples must be at least 1".into()));
    }
    let (da, db) = (a.posterior().dirichlet(), b.posterior().dirichlet());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    for _ in 0..samples {
        let pa = da.sample(&mut rng);
        let pb = db.sample(&mut rng);
        if hit(&pa, &pb) {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    Ok(Comparison {
        probability: p,
        std_error: (p * (1.0 - p) / samples as f64).sqrt(),
        samples,
    })
}

/// Posterior probability that A has a lower draw rate than B.
pub fn draw_rate_comparison(a: &OutcomeCounts, b: &OutcomeCounts, samples: u64, seed: u64) -> Result<Comparison, StatsError> {
    compare(a, b, samples, seed, |pa, pb| pa[1] < pb[1])
}

/// Expected score for White, `win + draw / 2`.
pub fn expected_score(pi: &[f64; 3]) -> f64 {
    pi[0] + 0.5 * pi[1]
}

/// Posterior probability that White's expected score is higher under A.
pub fn expected_score_comparison(a: &OutcomeCounts, b: &OutcomeCounts, samples: u64, seed: u64) -> Result<Comparison, StatsError> {
    compare(a, b, samples, seed, |pa, pb| expected_score(pa) > expected_score(pb))
}

/// `(wins + draws / 2) / N`.
pub fn empirical_expected_score(c: &OutcomeCounts) -> Result<f64, StatsError> {
    if c.total() == 0 {
        return Err(StatsError::EmptyCounts);
    }
    Ok((c.n_win as f64 + 0.5 * c.n_draw as f64) / c.total() as f64)
}

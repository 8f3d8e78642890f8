mod common;

use common::oracles::{beta_less_prob, score_greater_prob, uniform_tree_diversity};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use variant_lab::engine::{generate_set, SearchConfig, SetOptions, UniformPrior};
use variant_lab::notation::GameRecord;
use variant_lab::rules::{GameStatus, Outcome, Position, Reason, Variant};
use variant_lab::stats::piece_values::{fit_samples, loss_and_grad, TrainingSample};
use variant_lab::stats::{
    additional_candidates, count_outcomes, diversity_curve, draw_rate_comparison, exact_diversity, exact_kl,
    combined_prior, expected_score_comparison, game_length_histogram, kl_divergence, special_move_utilization, BoundCheck,
    ChessProcess, ChessReference, FixedBranching, OptimizerConfig, OutcomeCounts, SpecialMove, StatsError,
};

#[test]
fn draw_comparison_matches_beta_quadrature() {
    for (a, b, seed) in [((3, 5, 2), (1, 2, 7), 1u64), ((0, 0, 0), (4, 1, 0), 2), ((10, 20, 5), (12, 30, 3), 3)] {
        let (ca, cb) = (OutcomeCounts::new(a.0, a.1, a.2), OutcomeCounts::new(b.0, b.1, b.2));
        let got = draw_rate_comparison(&ca, &cb, 100_000, seed).unwrap();
        // The draw marginal of Dirichlet(w, d, l) is Beta(d, w + l).
        let [wa, da, la] = ca.posterior().params;
        let [wb, db, lb] = cb.posterior().params;
        let want = beta_less_prob(da, wa + la, db, wb + lb);
        assert!((got.probability - want).abs() <= 3.0 * got.std_error, "{a:?} vs {b:?}: {} vs {want}", got.probability);
    }
}

#[test]
fn score_comparison_matches_grid_integration() {
    for (a, b) in [((3, 1, 2), (1, 2, 3)), ((0, 4, 0), (1, 2, 1)), ((6, 2, 1), (5, 0, 5))] {
        let (ca, cb) = (OutcomeCounts::new(a.0, a.1, a.2), OutcomeCounts::new(b.0, b.1, b.2));
        let got = expected_score_comparison(&ca, &cb, 100_000, 4).unwrap();
        let want = score_greater_prob(ca.posterior().params, cb.posterior().params);
        assert!((got.probability - want).abs() <= 3.0 * got.std_error, "{a:?} vs {b:?}: {} vs {want}", got.probability);
    }
}

#[test]
fn comparisons_are_seeded_and_validated() {
    let (a, b) = (OutcomeCounts::new(4, 3, 2), OutcomeCounts::new(2, 3, 4));
    assert_eq!(draw_rate_comparison(&a, &b, 5000, 9).unwrap(), draw_rate_comparison(&a, &b, 5000, 9).unwrap());
    assert!(matches!(expected_score_comparison(&a, &b, 0, 9), Err(StatsError::InvalidArgument(_))));
    let rev = expected_score_comparison(&b, &a, 200_000, 9).unwrap();
    let fwd = expected_score_comparison(&a, &b, 200_000, 10).unwrap();
    assert!((rev.probability + fwd.probability - 1.0).abs() < 0.01);
}

fn record(result: Outcome, plies: usize) -> GameRecord {
    let cfg = SearchConfig { simulations: 4, max_game_plies: plies as u32, seed: plies as u64, ..SearchConfig::default() };
    let mut g = generate_set(Variant::Classical, &UniformPrior, &cfg, 1, &SetOptions::default(), None).unwrap().remove(0);
    g.result = GameStatus { state: result, reason: Reason::None };
    g
}

#[test]
fn counting_and_histograms() {
    let games = vec![record(Outcome::WhiteWins, 3), record(Outcome::Draw, 12), record(Outcome::BlackWins, 12), record(Outcome::WhiteWins, 25)];
    assert_eq!(count_outcomes(&games).unwrap(), OutcomeCounts::new(2, 1, 1));
    let h = game_length_histogram(&games, 10).unwrap();
    let lens: Vec<usize> = games.iter().map(|g| g.moves.len()).collect();
    assert_eq!(h.all.iter().sum::<u64>(), 4);
    for (i, &n) in h.all.iter().enumerate() {
        assert_eq!(n as usize, lens.iter().filter(|&&l| l / 10 == i).count());
    }
    assert!(h.decisive.iter().zip(&h.all).all(|(d, a)| d <= a));
    let mut bad = games.clone();
    bad[2].result.state = Outcome::Ongoing;
    assert!(matches!(count_outcomes(&bad), Err(StatsError::UnfinishedGame { index: 2 })));
}

#[test]
fn diversity_on_constant_branching_trees() {
    for b in [2usize, 5, 9] {
        let tree = FixedBranching::uniform(b, 6);
        let exact = exact_diversity(&tree, 8);
        let mc = diversity_curve(&tree, 8, 2000, 1).unwrap();
        for t in 0..6 {
            let want_h = (t + 1) as f64 * (b as f64).ln();
            assert!((exact.plies[t].entropy - want_h).abs() < 1e-9);
            assert!((exact.plies[t].candidates - b as f64).abs() < 1e-8);
            assert!((mc.plies[t].entropy - want_h).abs() < 1e-9, "uniform paths all have the same entropy");
        }
        // Past the tree's depth no sequence contributes.
        assert_eq!(mc.plies[6].samples, 0);
    }
    // Skewed branching: H(1) = entropy of the step distribution.
    let tree = FixedBranching { probs: vec![0.5, 0.25, 0.25], depth: 4 };
    let mc = diversity_curve(&tree, 4, 20_000, 2).unwrap();
    let h1 = -(0.5f64 * 0.5f64.ln() + 0.5 * 0.25f64.ln());
    for t in 0..4 {
        let s = mc.plies[t];
        assert!((s.entropy - (t + 1) as f64 * h1).abs() <= 3.0 * s.entropy_se + 1e-12);
        assert!((s.candidates - h1.exp()).abs() < 1e-9);
    }
}

#[test]
fn exact_diversity_matches_recursive_oracle() {
    for v in [Variant::Classical, Variant::SelfCapture, Variant::PawnOneSquare] {
        let process = ChessProcess::new(v, &UniformPrior);
        let got = exact_diversity(&process, 3);
        let want = uniform_tree_diversity(&Position::initial(v), 3);
        for (t, (h, b)) in want.into_iter().enumerate() {
            assert!((got.plies[t].entropy - h).abs() < 1e-9, "{v} ply {}", t + 1);
            assert!((got.plies[t].branching - b).abs() < 1e-9);
        }
    }
}

#[test]
fn kl_closed_forms() {
    // Uniform p over k of the reference's n actions at each of t steps.
    let p = FixedBranching { probs: vec![0.5, 0.5, 0.0, 0.0], depth: 3 };
    let q = FixedBranching::uniform(4, 3);
    let e = exact_kl(&p, &q, 3).unwrap();
    assert!((e.nats - 3.0 * 2f64.ln()).abs() < 1e-12);
    let mc = kl_divergence(&p, &q, 3, 500, 1).unwrap();
    assert!((mc.nats - e.nats).abs() < 1e-12);
    assert!(matches!(exact_kl(&q, &p, 1), Err(StatsError::SupportViolation { .. })));

    // One ply of Pawn-one-square against Classical: ln(20 / 12).
    let one = ChessProcess::new(Variant::PawnOneSquare, &UniformPrior);
    let classical = ChessReference { variant: Variant::Classical, prior: &UniformPrior };
    let e = exact_kl(&one, &classical, 1).unwrap();
    assert!((e.nats - (20.0f64 / 12.0).ln()).abs() < 1e-12);
    assert!((e.nats - 0.5108).abs() < 1e-3);
}

#[test]
fn kl_self_estimate_is_zero() {
    let process = ChessProcess::new(Variant::Torpedo, &UniformPrior);
    let same = ChessReference { variant: Variant::Torpedo, prior: &UniformPrior };
    let e = kl_divergence(&process, &same, 8, 300, 3).unwrap();
    assert_eq!(e.nats, 0.0);
    assert!(e.per_ply.iter().all(|&(_, v, _, _)| v == 0.0));
}

#[test]
fn candidate_curve_respects_the_bound() {
    let process = ChessProcess::new(Variant::Classical, &UniformPrior);
    let wider = ChessReference { variant: Variant::SelfCapture, prior: &UniformPrior };
    let c = additional_candidates(&process, &wider, 10, 50, 5).unwrap();
    assert_eq!(c.violations, 0);
    assert!(c.max_excess <= 0.0);
    assert_eq!(c.per_ply[0].3, 50);
    // Against itself the combined prior is the reference: no additional candidates.
    let same = ChessReference { variant: Variant::Classical, prior: &UniformPrior };
    let c = additional_candidates(&process, &same, 5, 20, 5).unwrap();
    assert!(c.per_ply.iter().all(|&(_, m, _, _)| m.abs() < 1e-9));
}

fn random_distribution(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut x: Vec<f64> = (0..n).map(|_| if rng.random_bool(0.2) { 0.0 } else { rng.random::<f64>().powi(3) }).collect();
    if x.iter().all(|&v| v == 0.0) {
        x[0] = 1.0;
    }
    let s: f64 = x.iter().sum();
    x.iter_mut().for_each(|v| *v /= s);
    x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn combined_prior_properties(seed in any::<u64>(), n in 2usize..=64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_distribution(&mut rng, n);
        let q = random_distribution(&mut rng, n);
        let r = combined_prior(&p, &q).unwrap();
        prop_assert!((r.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        // The normalizer lies in [1, 2], so r keeps at least half of either input.
        for i in 0..n {
            prop_assert!(r[i] >= 0.5 * p[i].max(q[i]) * (1.0 - 1e-12));
        }
        let support = (0..n).filter(|&i| p[i] > 0.0 || q[i] > 0.0).count() as f64;
        let c = BoundCheck::new(&p, &q).unwrap();
        prop_assert!(c.m_r <= support * (1.0 + 1e-12));
        let swapped = BoundCheck::new(&q, &p).unwrap();
        prop_assert!((swapped.m_r - c.m_r).abs() <= 1e-12 * c.m_r);
        prop_assert!(BoundCheck::new(&p, &p).unwrap().additional().abs() < 1e-9);
    }
}

fn planted_samples(w: [f64; 6], n: usize, seed: u64) -> Vec<TrainingSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let mut d = [1.0; 6];
            for x in d.iter_mut().skip(1) {
                *x = rng.random_range(-2i32..=2) as f64;
            }
            let g: f64 = w.iter().zip(&d).map(|(a, b)| a * b).sum::<f64>().tanh();
            // Decisive outcome with E[z] = g.
            let z = if rng.random::<f64>() < (1.0 + g) / 2.0 { 1.0 } else { -1.0 };
            TrainingSample { d, z }
        })
        .collect()
}

#[test]
fn piece_values_recover_planted_weights() {
    let w = [0.02, 0.10, 0.30, 0.32, 0.50, 0.90];
    let samples = planted_samples(w, 60_000, 8);
    let model = fit_samples(&samples, &OptimizerConfig::default()).unwrap();
    for (i, want) in [3.0, 3.2, 5.0, 9.0].into_iter().enumerate() {
        let got = model.normalized[i];
        assert!((got - want).abs() / want < 0.1, "piece {i}: {got} vs {want}");
    }
}

#[test]
fn gradient_matches_central_differences() {
    let samples = planted_samples([0.0, 0.2, 0.5, 0.6, 1.0, 1.8], 500, 3);
    let w = [0.05, 0.1, 0.3, 0.2, 0.4, 0.7];
    let (_, grad) = loss_and_grad(&samples, &w);
    for i in 0..6 {
        let h = 1e-5;
        let (mut up, mut down) = (w, w);
        up[i] += h;
        down[i] -= h;
        let fd = (loss_and_grad(&samples, &up).0 - loss_and_grad(&samples, &down).0) / (2.0 * h);
        assert!((fd - grad[i]).abs() <= 1e-5 * grad[i].abs().max(1e-3), "coordinate {i}: {fd} vs {}", grad[i]);
    }
}

#[test]
fn utilization_counts_special_moves() {
    let cfg = SearchConfig { simulations: 8, max_game_plies: 120, seed: 11, ..SearchConfig::default() };
    for (v, kind) in [(Variant::Torpedo, SpecialMove::Torpedo), (Variant::PawnBack, SpecialMove::Backward), (Variant::PawnSideways, SpecialMove::Lateral), (Variant::SelfCapture, SpecialMove::SelfCapture)] {
        let games = generate_set(v, &UniformPrior, &cfg, 12, &SetOptions::default(), None).unwrap();
        let r = special_move_utilization(&games).unwrap();
        assert!(r.consistency_errors().is_empty(), "{:?}", r.consistency_errors());
        let f = r.flag(kind);
        let direct: u64 = games.iter().map(|g| g.moves.iter().filter(|m| kind.matches(m)).count() as u64).sum();
        assert_eq!(f.plies_with, direct);
        assert!(f.plies_with > 0, "{v}: no {} moves in random play", kind.name());
        let classical = generate_set(Variant::Classical, &UniformPrior, &cfg, 4, &SetOptions::default(), None).unwrap();
        assert_eq!(special_move_utilization(&classical).unwrap().flag(kind).plies_with, 0);
    }
    let empty = special_move_utilization(&[]).unwrap();
    assert!(empty.empty && empty.consistency_errors().is_empty());
}

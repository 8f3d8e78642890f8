//! Independent reference computations for the statistics and search checks.

use statrs::distribution::{Beta, Continuous, ContinuousCDF};
use statrs::function::gamma::ln_gamma;
use variant_lab::rules::{Color, Position};

/// `P(X < Y)` for `X ~ Beta(a1, b1)`, `Y ~ Beta(a2, b2)` by composite Simpson
/// quadrature of `f_Y(y) F_X(y)` on `[0, 1]`.
pub fn beta_less_prob(a1: f64, b1: f64, a2: f64, b2: f64) -> f64 {
    let x = Beta::new(a1, b1).unwrap();
    let y = Beta::new(a2, b2).unwrap();
    let n = 20_000;
    let h = 1.0 / n as f64;
    let f = |t: f64| {
        // Endpoints may be singular for shape < 1; the integrand is bounded for shapes >= 1.
        let t = t.clamp(1e-12, 1.0 - 1e-12);
        y.pdf(t) * x.cdf(t)
    };
    let mut s = f(0.0) + f(1.0);
    for i in 1..n {
        s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// Probability mass of `w + d / 2` under `Dirichlet(alpha)` on `bins` equal
/// bins of `[0, 1]`, by midpoint integration of the density over a grid of
/// `(w, d)` cells.
fn score_histogram(alpha: [f64; 3], grid: usize, bins: usize) -> Vec<f64> {
    let ln_norm = ln_gamma(alpha.iter().sum()) - alpha.iter().map(|&a| ln_gamma(a)).sum::<f64>();
    let h = 1.0 / grid as f64;
    let mut out = vec![0.0; bins];
    for i in 0..grid {
        let w = (i as f64 + 0.5) * h;
        for j in 0..grid - i {
            let d = (j as f64 + 0.5) * h;
            let l = 1.0 - w - d;
            if l <= 0.0 {
                continue;
            }
            let ln_pdf = ln_norm + (alpha[0] - 1.0) * w.ln() + (alpha[1] - 1.0) * d.ln() + (alpha[2] - 1.0) * l.ln();
            let e = w + 0.5 * d;
            let b = ((e * bins as f64) as usize).min(bins - 1);
            out[b] += ln_pdf.exp() * h * h;
        }
    }
    let z: f64 = out.iter().sum();
    out.iter_mut().for_each(|x| *x /= z);
    out
}

/// `P(e_A > e_B)` for expected scores under the two Dirichlet posteriors.
pub fn score_greater_prob(alpha_a: [f64; 3], alpha_b: [f64; 3]) -> f64 {
    let bins = 4000;
    let a = score_histogram(alpha_a, 1500, bins);
    let b = score_histogram(alpha_b, 1500, bins);
    let mut below = 0.0;
    let mut p = 0.0;
    for i in 0..bins {
        p += a[i] * (below + 0.5 * b[i]);
        below += b[i];
    }
    p
}

/// Exact `(H(t), M(t))` for `t = 1..=plies` under a uniform prior, by plain
/// recursion over the move tree.
pub fn uniform_tree_diversity(root: &Position, plies: usize) -> Vec<(f64, f64)> {
    // Per ply: reached mass, sum mass * ln(1/p(seq)), sum mass * branching.
    let mut acc = vec![(0.0, 0.0, 0.0); plies];
    fn rec(p: &Position, t: usize, mass: f64, neg_log: f64, acc: &mut [(f64, f64, f64)]) {
        if t == acc.len() {
            return;
        }
        let moves = p.legal_moves();
        if moves.is_empty() {
            return;
        }
        let b = moves.len() as f64;
        acc[t].0 += mass;
        acc[t].1 += mass * (neg_log + b.ln());
        acc[t].2 += mass * b;
        for m in &moves {
            rec(&p.make_move(m), t + 1, mass / b, neg_log + b.ln(), acc);
        }
    }
    rec(root, 0, 1.0, 0.0, &mut acc);
    acc.iter().map(|&(m, h, b)| (h / m, b / m)).collect()
}

/// Whether White can force a promotion onto a square Black does not attack
/// within `plies` half-moves, Black to defend with every legal reply.
pub fn forced_safe_promotion(p: &Position, plies: u32) -> bool {
    if plies == 0 {
        return false;
    }
    let moves = p.legal_moves();
    if p.side_to_move() == Color::White {
        moves.iter().any(|m| {
            let n = p.make_move(m);
            (m.promotion.is_some() && !n.is_attacked(m.to, Color::Black)) || forced_safe_promotion(&n, plies - 1)
        })
    } else {
        !moves.is_empty() && moves.iter().all(|m| forced_safe_promotion(&p.make_move(m), plies - 1))
    }
}

//! Move-sequence processes: a state space, a sampling policy `p` and
//! reference policies `q` evaluated on the same states.

use std::fmt::{Debug, Display};

use crate::engine::PriorProvider;
use crate::notation::serialize_fen;
use crate::rules::{Move, Position, Variant};

/// A policy-driven walk from a root state. A state with an empty
/// distribution is terminal.
pub trait Process {
    type State: Clone;
    type Action: Copy + Eq + Ord + Debug + Display;

    fn root(&self) -> Self::State;
    /// The sampling policy `p` at `s`, one entry per available action.
    fn policy(&self, s: &Self::State) -> Vec<(Self::Action, f64)>;
    fn step(&self, s: &Self::State, a: &Self::Action) -> Self::State;
    /// Human-readable identity of a state, used in error reports.
    fn describe(&self, s: &Self::State) -> String;
}

/// A second policy `q` over the states of some process.
pub trait Reference<P: Process> {
    fn policy(&self, s: &P::State) -> Vec<(P::Action, f64)>;
}

/// Chess positions of one variant under a prior provider.
pub struct ChessProcess<'a> {
    pub variant: Variant,
    pub prior: &'a dyn PriorProvider,
    pub start: Position,
}

impl<'a> ChessProcess<'a> {
    pub fn new(variant: Variant, prior: &'a dyn PriorProvider) -> ChessProcess<'a> {
        ChessProcess {
            variant,
            prior,
            start: Position::initial(variant),
        }
    }
}

fn chess_policy(prior: &dyn PriorProvider, p: &Position) -> Vec<(Move, f64)> {
    let moves = p.legal_moves();
    if moves.is_empty() {
        return Vec::new();
    }
    let eval = prior.evaluate(p, &moves);
    moves.into_iter().zip(eval.probs).collect()
}

impl Process for ChessProcess<'_> {
    type State = Position;
    type Action = Move;

    fn root(&self) -> Position {
        self.start
    }

    fn policy(&self, s: &Position) -> Vec<(Move, f64)> {
        chess_policy(self.prior, s)
    }

    fn step(&self, s: &Position, a: &Move) -> Position {
        s.make_move(a)
    }

    fn describe(&self, s: &Position) -> String {
        serialize_fen(s)
    }
}

/// Another variant's prior, evaluated on the same board under its own rules.
pub struct ChessReference<'a> {
    pub variant: Variant,
    pub prior: &'a dyn PriorProvider,
}

impl<'a> Reference<ChessProcess<'a>> for ChessReference<'_> {
    fn policy(&self, s: &Position) -> Vec<(Move, f64)> {
        chess_policy(self.prior, &s.with_variant(self.variant))
    }
}

/// Synthetic tree: every state below `depth` offers the same actions
/// `0..probs.len()` with fixed probabilities; states at `depth` are terminal.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedBranching {
    pub probs: Vec<f64>,
    pub depth: u32,
}

impl FixedBranching {
    pub fn uniform(branching: usize, depth: u32) -> FixedBranching {
        FixedBranching {
            probs: vec![1.0 / branching as f64; branching],
            depth,
        }
    }
}

impl Process for FixedBranching {
    type State = u32;
    type Action = u32;

    fn root(&self) -> u32 {
        0
    }

    fn policy(&self, s: &u32) -> Vec<(u32, f64)> {
        if *s >= self.depth {
            return Vec::new();
        }
        self.probs.iter().enumerate().map(|(i, &p)| (i as u32, p)).collect()
    }

    fn step(&self, s: &u32, _a: &u32) -> u32 {
        s + 1
    }

    fn describe(&self, s: &u32) -> String {
        format!("depth {s}")
    }
}

/// A reference that offers fixed probabilities at every state.
impl<P: Process<Action = u32>> Reference<P> for FixedBranching {
    fn policy(&self, _s: &P::State) -> Vec<(u32, f64)> {
        self.probs.iter().enumerate().map(|(i, &p)| (i as u32, p)).collect()
    }
}

/// Action sampled from a distribution given a uniform draw `u` in `[0, 1)`.
pub(crate) fn pick<A: Copy>(dist: &[(A, f64)], u: f64) -> (A, f64) {
    let total: f64 = dist.iter().map(|(_, p)| p).sum();
    let mut x = u * total;
    for &(a, p) in dist {
        if x < p {
            return (a, p);
        }
        x -= p;
    }
    // Rounding ran off the end; take the last action with mass.
    *dist.iter().rev().find(|(_, p)| *p > 0.0).expect("distribution has mass")
}

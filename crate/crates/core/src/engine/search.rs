//! PUCT Monte Carlo tree search.
//!
//! Every node is expanded when it is created, so a simulation descends
//! through expanded nodes, creates one new child (or reaches a terminal
//! node) and backs the value up the path. Node statistics are kept from the
//! perspective of the player who moved into the node, so a parent reads a
//! child's mean value directly as its own `Q`.

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use super::prior::PriorProvider;
use super::EngineError;
use crate::rules::{repetition_key, status_with_moves, Move, Outcome, Position, RepetitionKey};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub simulations: u32,
    pub c_puct: f64,
    pub root_noise_alpha: f64,
    pub root_noise_weight: f64,
    /// Opening plies whose move is sampled from the visit distribution.
    pub softmax_plies: u32,
    pub max_game_plies: u32,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            simulations: 800,
            c_puct: 1.5,
            root_noise_alpha: 0.3,
            root_noise_weight: 0.25,
            softmax_plies: 20,
            max_game_plies: 512,
            seed: 0,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        let bad = |m: &str| Err(EngineError::InvalidConfig(m.to_string()));
        if self.simulations == 0 {
            return bad("simulations must be at least 1");
        }
        if !(self.c_puct > 0.0 && self.c_puct.is_finite()) {
            return bad("c_puct must be positive");
        }
        if !(0.0..=1.0).contains(&self.root_noise_weight) {
            return bad("root noise weight must lie in [0, 1]");
        }
        if self.root_noise_weight > 0.0 && !(self.root_noise_alpha > 0.0 && self.root_noise_alpha.is_finite()) {
            return bad("root noise alpha must be positive");
        }
        Ok(())
    }
}

/// Visit counts per root move plus the root's mean value for the side to move.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    /// Legal moves of the root in canonical order.
    pub moves: Vec<Move>,
    pub visits: Vec<u32>,
    pub root_value: f64,
}

impl SearchResult {
    /// Most visited move; ties go to the earliest in canonical order.
    pub fn best_index(&self) -> usize {
        argmax_first(&self.visits)
    }
}

/// Index of the first maximum.
pub fn argmax_first(visits: &[u32]) -> usize {
    let mut best = 0;
    for (i, &v) in visits.iter().enumerate() {
        if v > visits[best] {
            best = i;
        }
    }
    best
}

/// Statistics of one edge as seen from the parent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeStats {
    pub visits: u32,
    /// Sum of backed-up values from the parent's perspective.
    pub value_sum: f64,
    pub prior: f64,
}

/// PUCT score `Q + c * P * sqrt(sum N) / (1 + N)` with `Q = 0` for an
/// unvisited edge.
#[inline]
pub fn puct_score(e: &EdgeStats, sqrt_total: f64, c_puct: f64) -> f64 {
    let q = if e.visits == 0 {
        0.0
    } else {
        e.value_sum / e.visits as f64
    };
    q + c_puct * e.prior * sqrt_total / (1.0 + e.visits as f64)
}

/// Edge maximizing the PUCT score. Ties go to the higher prior, then to the
/// earlier edge.
pub fn select_edge(edges: &[EdgeStats], c_puct: f64) -> usize {
    let total: u32 = edges.iter().map(|e| e.visits).sum();
    let sqrt_total = (total as f64).sqrt();
    let mut best = 0;
    let mut best_score = f64::NEG_INFINITY;
    for (i, e) in edges.iter().enumerate() {
        let s = puct_score(e, sqrt_total, c_puct);
        if s > best_score || (s == best_score && e.prior > edges[best].prior) {
            best = i;
            best_score = s;
        }
    }
    best
}

const UNEXPANDED: u32 = u32::MAX;

struct Node {
    pos: Position,
    moves: Vec<Move>,
    edges: Vec<EdgeStats>,
    children: Vec<u32>,
    /// Value for the side to move when the node is terminal.
    terminal: Option<f64>,
    visits: u32,
}

/// One selection decision, recorded for inspection by tests.
#[derive(Clone, Debug, PartialEq)]
pub struct Selection {
    pub depth: usize,
    pub edges: Vec<EdgeStats>,
    pub chosen: usize,
}

/// Search arena. Reusing one across moves avoids reallocation; no
/// statistics carry over between searches.
#[derive(Default)]
pub struct SearchTree {
    nodes: Vec<Node>,
    keys: Vec<RepetitionKey>,
    path: Vec<u32>,
    scratch: Vec<Move>,
    /// Records every selection when set.
    pub trace: Option<Vec<Selection>>,
}

impl SearchTree {
    pub fn new() -> SearchTree {
        SearchTree::default()
    }

    /// Nodes created by the last search, root included.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Checks that every node's visit count is one more than the sum of its
    /// edge visits and that mean values lie in `[-1, 1]`.
    pub fn check_invariants(&self) -> Result<(), String> {
        for (i, n) in self.nodes.iter().enumerate() {
            let edge_sum: u32 = n.edges.iter().map(|e| e.visits).sum();
            if n.terminal.is_none() && n.visits != edge_sum + 1 {
                return Err(format!("node {i}: N = {} but edges sum to {edge_sum}", n.visits));
            }
            for e in &n.edges {
                if e.visits > 0 && (e.value_sum / e.visits as f64).abs() > 1.0 + 1e-12 {
                    return Err(format!("node {i}: mean value out of range"));
                }
            }
        }
        Ok(())
    }

    /// Runs exactly `cfg.simulations` simulations from `root`.
    ///
    /// `history` holds the repetition keys of the positions before `root`
    /// in the game. Root priors are mixed with Dirichlet noise when
    /// `at_root` is set and the noise weight is positive.
    pub fn search<P: PriorProvider + ?Sized, R: Rng + ?Sized>(
        &mut self,
        root: &Position,
        history: &[RepetitionKey],
        prior: &P,
        cfg: &SearchConfig,
        at_root: bool,
        rng: &mut R,
    ) -> Result<SearchResult, EngineError> {
        cfg.validate()?;
        self.nodes.clear();
        self.keys.clear();
        self.keys.extend_from_slice(history);
        if let Some(t) = self.trace.as_mut() {
            t.clear();
        }

        let _ = self.create_node(*root, prior);
        if self.nodes[0].terminal.is_some() {
            return Err(EngineError::NoLegalMoves);
        }
        self.nodes[0].visits = 1;
        if at_root && cfg.root_noise_weight > 0.0 && self.nodes[0].edges.len() > 1 {
            self.add_root_noise(cfg, rng)?;
        }

        for _ in 0..cfg.simulations {
            self.simulate(prior, cfg);
        }

        let root = &self.nodes[0];
        let visits: Vec<u32> = root.edges.iter().map(|e| e.visits).collect();
        let total: u32 = visits.iter().sum();
        let value_sum: f64 = root.edges.iter().map(|e| e.value_sum).sum();
        Ok(SearchResult {
            moves: root.moves.clone(),
            visits,
            root_value: if total == 0 { 0.0 } else { value_sum / total as f64 },
        })
    }

    fn add_root_noise<R: Rng + ?Sized>(&mut self, cfg: &SearchConfig, rng: &mut R) -> Result<(), EngineError> {
        let gamma = Gamma::new(cfg.root_noise_alpha, 1.0)
            .map_err(|e| EngineError::InvalidConfig(format!("root noise alpha: {e}")))?;
        let edges = &mut self.nodes[0].edges;
        let mut noise: Vec<f64> = edges.iter().map(|_| gamma.sample(rng)).collect();
        let z: f64 = noise.iter().sum();
        if z <= 0.0 {
            // Every draw underflowed; fall back to a uniform noise vector.
            noise.iter_mut().for_each(|x| *x = 1.0);
        }
        let z: f64 = noise.iter().sum();
        let eps = cfg.root_noise_weight;
        for (e, n) in edges.iter_mut().zip(&noise) {
            e.prior = (1.0 - eps) * e.prior + eps * n / z;
        }
        let s: f64 = edges.iter().map(|e| e.prior).sum();
        for e in edges.iter_mut() {
            e.prior /= s;
        }
        Ok(())
    }

    /// Adds a fully evaluated node; returns its value for the side to move.
    fn create_node<P: PriorProvider + ?Sized>(&mut self, pos: Position, prior: &P) -> f64 {
        let mut moves = std::mem::take(&mut self.scratch);
        pos.legal_moves_into(&mut moves);
        let st = status_with_moves(&pos, &moves, &self.keys);
        let (terminal, value, edges) = if st.is_terminal() {
            let v = match st.state {
                Outcome::Draw => 0.0,
                // Decisive terminal states are always won by the player who just moved.
                _ => -1.0,
            };
            (Some(v), v, Vec::new())
        } else {
            let eval = prior.evaluate(&pos, &moves);
            debug_assert_eq!(eval.probs.len(), moves.len());
            let edges = eval
                .probs
                .iter()
                .map(|&p| EdgeStats {
                    visits: 0,
                    value_sum: 0.0,
                    prior: p,
                })
                .collect();
            (None, eval.value.clamp(-1.0, 1.0), edges)
        };
        let children = vec![UNEXPANDED; moves.len()];
        self.scratch = Vec::with_capacity(48);
        self.nodes.push(Node {
            pos,
            moves,
            edges,
            children,
            terminal,
            visits: 0,
        });
        value
    }

    fn simulate<P: PriorProvider + ?Sized>(&mut self, prior: &P, cfg: &SearchConfig) {
        self.path.clear();
        let base_keys = self.keys.len();
        let mut node = 0usize;
        let leaf_value;
        loop {
            if let Some(v) = self.nodes[node].terminal {
                leaf_value = v;
                break;
            }
            let a = select_edge(&self.nodes[node].edges, cfg.c_puct);
            if let Some(t) = self.trace.as_mut() {
                t.push(Selection {
                    depth: self.path.len(),
                    edges: self.nodes[node].edges.clone(),
                    chosen: a,
                });
            }
            self.path.push(node as u32);
            self.path.push(a as u32);
            let key = repetition_key(&self.nodes[node].pos);
            self.keys.push(key);
            let child = self.nodes[node].children[a];
            if child == UNEXPANDED {
                let next = self.nodes[node].pos.make_move(&self.nodes[node].moves[a]);
                let id = self.nodes.len() as u32;
                self.nodes[node].children[a] = id;
                leaf_value = self.create_node(next, prior);
                node = id as usize;
                break;
            }
            node = child as usize;
        }
        self.keys.truncate(base_keys);

        // `leaf_value` is for the side to move at the leaf; the edge into the
        // leaf belongs to the opponent.
        self.nodes[node].visits += 1;
        let mut v = -leaf_value;
        for pair in self.path.chunks_exact(2).rev() {
            let (parent, edge) = (pair[0] as usize, pair[1] as usize);
            let e = &mut self.nodes[parent].edges[edge];
            e.visits += 1;
            e.value_sum += v;
            self.nodes[parent].visits += 1;
            v = -v;
        }
    }
}

/// One-shot search with a fresh tree.
pub fn search<P: PriorProvider + ?Sized, R: Rng + ?Sized>(
    p: &Position,
    history: &[RepetitionKey],
    prior: &P,
    cfg: &SearchConfig,
    at_root: bool,
    rng: &mut R,
) -> Result<SearchResult, EngineError> {
    SearchTree::new().search(p, history, prior, cfg, at_root, rng)
}

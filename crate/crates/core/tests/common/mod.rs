#![allow(dead_code)]

pub mod corpus;
pub mod naive;
pub mod oracles;

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use variant_lab::notation::serialize_fen;
use variant_lab::rules::{Position, Variant};

/// Positions reached by uniformly random playouts from the initial array,
/// restarting whenever a game ends or runs past `max_plies`.
pub fn random_positions(variant: Variant, count: usize, max_plies: usize, seed: u64) -> Vec<Position> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut p = Position::initial(variant);
    let mut ply = 0;
    while out.len() < count {
        out.push(p);
        let moves = p.legal_moves();
        match moves.choose(&mut rng) {
            Some(m) if ply < max_plies && p.halfmove_clock() < 100 => {
                p = p.make_move(m);
                ply += 1;
            }
            _ => {
                p = Position::initial(variant);
                ply = 0;
            }
        }
    }
    out
}

/// Library moves as sorted LAN strings.
pub fn lib_lans(p: &Position) -> Vec<String> {
    let mut v: Vec<String> = p.legal_moves().iter().map(|m| m.to_string()).collect();
    v.sort();
    v
}

pub fn naive_lans(p: &Position) -> Vec<String> {
    naive::NState::from_fen(&serialize_fen(p)).legal_lans()
}

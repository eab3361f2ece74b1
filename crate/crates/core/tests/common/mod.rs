#![allow(dead_code)]

pub mod reference;

use pmotion_core::{CardValue, GameOutcome, Outcome, RecombineMode};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[allow(unused_imports)]
pub use reference::{reference_game, reference_round, RefResult};

pub fn ranks(values: &[CardValue]) -> Vec<u8> {
    values.iter().map(|v| v.rank()).collect()
}

pub fn values(ranks: &[u8]) -> Vec<CardValue> {
    ranks.iter().map(|&r| CardValue::new(r).unwrap()).collect()
}

pub fn is_flip(mode: RecombineMode) -> bool {
    mode == RecombineMode::Flip
}

/// Test-side deck source, independent of the simulator's generator.
pub fn test_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random deck a real game could hold: a full shuffled pack, or all four
/// copies of a random subset of values, shuffled.
pub fn random_deck<R: Rng>(rng: &mut R, full: bool) -> Vec<u8> {
    let mut ranks: Vec<u8> = (1..=13).collect();
    ranks.shuffle(rng);
    if !full {
        ranks.truncate(rng.random_range(1..=13));
    }
    let mut deck: Vec<u8> = ranks.iter().flat_map(|&r| [r; 4]).collect();
    deck.shuffle(rng);
    deck
}

/// The first 4..=52 cards of a shuffled pack; some values may have fewer
/// than four copies. Only suitable for single-round checks, since such decks
/// can orbit for a very long time.
pub fn random_prefix<R: Rng>(rng: &mut R) -> Vec<u8> {
    let mut pack: Vec<u8> = (1..=13).flat_map(|r| [r; 4]).collect();
    pack.shuffle(rng);
    pack.truncate(4 * rng.random_range(1..=13));
    pack
}

pub fn matches_reference(engine: &GameOutcome, reference: &RefResult) -> bool {
    (engine.outcome == Outcome::Completed) == reference.completed
        && engine.rounds == reference.rounds
        && engine.moves == reference.moves
        && engine.first_discard_round == reference.first_discard_round
        && engine.cycle_length() == reference.cycle_length
        && engine.cycle.map(|c| c.first_seen_round) == reference.first_seen_round
}

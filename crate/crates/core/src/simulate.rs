//! Seeded Monte Carlo runs over shuffled packs.
//!
//! Every game draws its deck from its own generator, seeded by mixing the
//! master seed with the game index, so results do not depend on how games are
//! scheduled across threads.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::card::{standard_pack, CardValue};
use crate::cycles::SeenLedger;
use crate::engine::{play_game_with, Outcome, RecombineMode, Silent};
use crate::error::{Error, Result};

/// Name of the per-game generator, echoed into every output.
pub const GENERATOR: &str = "xoshiro256++/splitmix64(seed,index)";

pub const DEFAULT_GAMES: u64 = 10_000;
pub const DEFAULT_BATCHES: u64 = 10;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub games: u64,
    pub batches: u64,
    pub master_seed: u64,
    pub recombine_mode: RecombineMode,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            games: DEFAULT_GAMES,
            batches: DEFAULT_BATCHES,
            master_seed: DEFAULT_SEED,
            recombine_mode: RecombineMode::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.games == 0 {
            return Err(Error::Config("games must be at least 1".into()));
        }
        if self.batches == 0 {
            return Err(Error::Config("batches must be at least 1".into()));
        }
        if !self.games.is_multiple_of(self.batches) {
            return Err(Error::Config(format!(
                "{} games cannot be split into {} equal batches",
                self.games, self.batches
            )));
        }
        Ok(())
    }

    pub fn batch_size(&self) -> u64 {
        self.games / self.batches
    }

    /// Batch that owns `game_index`.
    pub fn batch_of(&self, game_index: u64) -> u64 {
        game_index / self.batch_size()
    }
}

/// Per-game record as persisted in the raw results file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameResult {
    pub game_index: u64,
    pub outcome: Outcome,
    pub rounds: u32,
    pub moves: u64,
    pub first_discard_round: Option<u32>,
    pub cycle_length: Option<u32>,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for game `game_index` of a run with `master_seed`.
pub fn game_seed(master_seed: u64, game_index: u64) -> u64 {
    splitmix64(master_seed ^ splitmix64(game_index))
}

pub fn game_rng(master_seed: u64, game_index: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(game_seed(master_seed, game_index))
}

/// A uniformly shuffled 52-card pack (Fisher-Yates).
pub fn shuffle<R: rand::Rng + ?Sized>(rng: &mut R) -> Vec<CardValue> {
    let mut deck = standard_pack();
    deck.shuffle(rng);
    deck
}

/// The deck dealt in game `game_index` of a run with `master_seed`.
pub fn deck_for(master_seed: u64, game_index: u64) -> Vec<CardValue> {
    shuffle(&mut game_rng(master_seed, game_index))
}

/// Plays one game of a run.
pub fn play_indexed(master_seed: u64, game_index: u64, mode: RecombineMode) -> GameResult {
    let deck = deck_for(master_seed, game_index);
    let outcome = play_game_with(deck, mode, &mut SeenLedger::new(), &mut Silent)
        .expect("a shuffled standard pack is always a legal deck");
    GameResult {
        game_index,
        outcome: outcome.outcome,
        rounds: outcome.rounds,
        moves: outcome.moves,
        first_discard_round: outcome.first_discard_round,
        cycle_length: outcome.cycle_length(),
    }
}

/// Knobs that affect how a run executes but never what it produces.
#[derive(Default)]
pub struct RunOptions<'a> {
    /// Worker threads; `None` uses the global pool. Ignored without the
    /// `parallel` feature.
    pub workers: Option<usize>,
    /// Called once per finished game, from any worker.
    pub progress: Option<&'a (dyn Fn() + Sync)>,
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<GameResult>> {
    run_experiment_with(config, &RunOptions::default())
}

/// Plays every game of `config`, returned in game-index order.
pub fn run_experiment_with(
    config: &ExperimentConfig,
    options: &RunOptions<'_>,
) -> Result<Vec<GameResult>> {
    config.validate()?;
    let play = |index: u64| {
        let result = play_indexed(config.master_seed, index, config.recombine_mode);
        if let Some(progress) = options.progress {
            progress();
        }
        result
    };
    run_indexed(config.games, options.workers, play)
}

#[cfg(feature = "parallel")]
fn run_indexed<F>(games: u64, workers: Option<usize>, play: F) -> Result<Vec<GameResult>>
where
    F: Fn(u64) -> GameResult + Sync + Send,
{
    use rayon::prelude::*;

    let collect = || (0..games).into_par_iter().map(&play).collect::<Vec<_>>();
    match workers {
        None => Ok(collect()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(collect))
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn run_indexed<F>(games: u64, _workers: Option<usize>, play: F) -> Result<Vec<GameResult>>
where
    F: Fn(u64) -> GameResult,
{
    Ok((0..games).map(play).collect())
}

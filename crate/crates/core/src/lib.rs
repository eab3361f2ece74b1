//! Simulator and statistics toolkit for the Perpetual Motion solitaire.
//!
//! * [`engine`] plays a single game deterministically.
//! * [`cycles`] recognises repeated end-of-round orders.
//! * [`simulate`] runs seeded Monte Carlo experiments.
//! * [`stats`] turns results into summaries, histograms and output files.
//! * [`results`] reads and writes the raw per-game results file.
//! * [`trace`] writes line-oriented replays of a single game.
//! * [`explore`] searches small decks exhaustively for cycles.

pub mod card;
pub mod cycles;
pub mod engine;
pub mod error;
pub mod explore;
pub mod results;
pub mod simulate;
pub mod stats;
pub mod trace;

pub use card::{format_values, parse_values, CardValue};
pub use cycles::{CycleDetector, CycleReport, SeenLedger};
pub use engine::{play_game, round_map, GameOutcome, GameState, Outcome, RecombineMode, TurnEvent};
pub use error::{Error, Result};
pub use simulate::{run_experiment, ExperimentConfig, GameResult};

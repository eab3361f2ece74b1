//! Line-oriented game traces for replays.
//!
//! ```text
//! # mode=flip cards=4
//! # deck: 8 8 8 8
//! round 1 turn 1 deal 8 8 8 8
//! round 1 turn 1 discard 8 8 8 8
//! round 1 end: -
//! result: completed rounds=1 moves=8 first_discard_round=1
//! ```
//!
//! Turn lines are only written in verbose mode. An empty hand prints as `-`.

use std::io::{self, Write};

use crate::card::{format_values, CardValue};
use crate::cycles::SeenLedger;
use crate::engine::{
    play_game_with, GameObserver, GameOutcome, GameState, RecombineMode, TurnEvent,
};
use crate::error::Result;

struct TraceObserver<W> {
    out: W,
    verbose: bool,
    turn: u32,
    failed: Option<io::Error>,
}

impl<W: Write> TraceObserver<W> {
    fn emit(&mut self, line: std::fmt::Arguments<'_>) {
        if self.failed.is_none() {
            if let Err(e) = self.out.write_fmt(line) {
                self.failed = Some(e);
            }
        }
    }
}

impl<W: Write> GameObserver for TraceObserver<W> {
    fn turn(&mut self, round: u32, event: &TurnEvent, _state: &GameState) {
        if let TurnEvent::Dealt { .. } = event {
            self.turn += 1;
        }
        if self.verbose {
            let turn = self.turn;
            self.emit(format_args!("round {round} turn {turn} {event}\n"));
        }
    }

    fn round_end(&mut self, round: u32, hand: &[CardValue]) {
        self.turn = 0;
        let tokens = if hand.is_empty() {
            "-".to_string()
        } else {
            format_values(hand)
        };
        self.emit(format_args!("round {round} end: {tokens}\n"));
    }
}

/// Plays `deck` and writes its trace to `out`.
pub fn write_trace<W: Write>(
    deck: Vec<CardValue>,
    mode: RecombineMode,
    verbose: bool,
    mut out: W,
) -> Result<GameOutcome> {
    writeln!(out, "# mode={mode} cards={}", deck.len())?;
    writeln!(out, "# deck: {}", format_values(&deck))?;
    let mut observer = TraceObserver {
        out,
        verbose,
        turn: 0,
        failed: None,
    };
    let outcome = play_game_with(deck, mode, &mut SeenLedger::new(), &mut observer)?;
    if let Some(e) = observer.failed {
        return Err(e.into());
    }
    writeln!(observer.out, "result: {outcome}")?;
    Ok(outcome)
}

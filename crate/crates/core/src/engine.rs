//! One game of Perpetual Motion.
//!
//! A turn deals four cards onto the four piles. Four equal values are
//! discarded; otherwise every dealt duplicate moves onto the leftmost dealt
//! card of its value. Only the four dealt cards are examined, so tops exposed
//! by a consolidation are never re-checked within the same turn. When the hand
//! runs out the piles are stacked (pile 1 on 2 on 3 on 4) into the next hand.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::card::{format_values, validate_deck, CardValue};
use crate::cycles::{CycleDetector, CycleReport, SeenLedger};
use crate::error::{Error, Result};

pub const PILES: usize = 4;

/// How the stacked piles become the next hand.
///
/// The piles are always stacked pile 1 on pile 2 on pile 3 on pile 4, so the
/// top card of pile 1 is uppermost. `NoFlip` deals from that uppermost card
/// downward. `Flip` turns the stack over first, so the bottom card of pile 4
/// is dealt first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecombineMode {
    #[default]
    Flip,
    NoFlip,
}

impl RecombineMode {
    pub const ALL: [RecombineMode; 2] = [RecombineMode::Flip, RecombineMode::NoFlip];

    pub fn as_str(self) -> &'static str {
        match self {
            RecombineMode::Flip => "flip",
            RecombineMode::NoFlip => "noflip",
        }
    }
}

impl fmt::Display for RecombineMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RecombineMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "flip" => Ok(RecombineMode::Flip),
            "noflip" | "no-flip" => Ok(RecombineMode::NoFlip),
            other => Err(Error::Config(format!("unknown recombine mode {other:?}"))),
        }
    }
}

/// Something that happened during a turn. Pile numbers are 1-based, left to
/// right.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TurnEvent {
    Dealt {
        values: [CardValue; PILES],
    },
    Consolidated {
        value: CardValue,
        from: usize,
        to: usize,
    },
    Discarded {
        cards: [CardValue; PILES],
    },
}

impl fmt::Display for TurnEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TurnEvent::Dealt { values } => write!(f, "deal {}", format_values(values)),
            TurnEvent::Consolidated { value, from, to } => {
                write!(f, "move {value} pile{from} -> pile{to}")
            }
            TurnEvent::Discarded { cards } => write!(f, "discard {}", format_values(cards)),
        }
    }
}

/// The four piles. Each pile is stored bottom to top.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tableau {
    piles: [Vec<CardValue>; PILES],
}

impl Tableau {
    /// Builds a tableau from piles given bottom to top.
    pub fn from_piles(piles: [Vec<CardValue>; PILES]) -> Self {
        Tableau { piles }
    }

    /// Pile `index` (0-based), bottom to top.
    pub fn pile(&self, index: usize) -> &[CardValue] {
        &self.piles[index]
    }

    pub fn piles(&self) -> &[Vec<CardValue>; PILES] {
        &self.piles
    }

    pub fn top(&self, index: usize) -> Option<CardValue> {
        self.piles[index].last().copied()
    }

    pub fn len(&self) -> usize {
        self.piles.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.piles.iter().all(Vec::is_empty)
    }

    /// Gathers the piles into a new hand in deal order and leaves every pile
    /// empty.
    pub fn recombine(&mut self, mode: RecombineMode) -> Vec<CardValue> {
        let mut hand = Vec::with_capacity(self.len());
        self.recombine_into(mode, &mut hand);
        hand
    }

    fn recombine_into(&mut self, mode: RecombineMode, hand: &mut Vec<CardValue>) {
        hand.clear();
        match mode {
            RecombineMode::NoFlip => {
                for pile in &mut self.piles {
                    hand.extend(pile.drain(..).rev());
                }
            }
            RecombineMode::Flip => {
                for pile in self.piles.iter_mut().rev() {
                    hand.append(pile);
                }
            }
        }
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, pile) in self.piles.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            if pile.is_empty() {
                f.write_str("-")?;
            } else {
                f.write_str(&format_values(pile))?;
            }
        }
        Ok(())
    }
}

/// Everything needed to continue a game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameState {
    hand: Vec<CardValue>,
    next: usize,
    tableau: Tableau,
    discarded: usize,
    round_index: u32,
    moves: u64,
    first_discard_round: Option<u32>,
    initial_size: usize,
    mode: RecombineMode,
}

impl GameState {
    /// Starts a game from a legal deck, position 0 dealt first.
    pub fn new(deck: Vec<CardValue>, mode: RecombineMode) -> Result<Self> {
        validate_deck(&deck)?;
        Ok(GameState {
            mode,
            initial_size: deck.len(),
            hand: deck,
            next: 0,
            tableau: Tableau::default(),
            discarded: 0,
            round_index: 0,
            moves: 0,
            first_discard_round: None,
        })
    }

    /// Cards still to be dealt this round.
    pub fn hand(&self) -> &[CardValue] {
        &self.hand[self.next..]
    }

    pub fn tableau(&self) -> &Tableau {
        &self.tableau
    }

    pub fn discarded(&self) -> usize {
        self.discarded
    }

    /// Completed rounds so far.
    pub fn round_index(&self) -> u32 {
        self.round_index
    }

    pub fn moves(&self) -> u64 {
        self.moves
    }

    pub fn first_discard_round(&self) -> Option<u32> {
        self.first_discard_round
    }

    pub fn mode(&self) -> RecombineMode {
        self.mode
    }

    pub fn initial_size(&self) -> usize {
        self.initial_size
    }

    /// Cards still in play (hand plus piles).
    pub fn cards_in_play(&self) -> usize {
        self.hand().len() + self.tableau.len()
    }

    pub fn is_complete(&self) -> bool {
        self.cards_in_play() == 0
    }

    /// Deals the next four cards and applies the discard or consolidation
    /// rule to them.
    ///
    /// # Panics
    ///
    /// If fewer than four cards remain in the hand. Legal games always hold a
    /// multiple of four.
    pub fn deal_turn<F: FnMut(TurnEvent)>(&mut self, sink: &mut F) {
        assert!(
            self.hand().len() >= PILES,
            "deal_turn needs four cards, hand has {}",
            self.hand().len()
        );
        let mut dealt = [CardValue::ACE; PILES];
        dealt.copy_from_slice(&self.hand[self.next..self.next + PILES]);
        self.next += PILES;
        for (pile, &value) in self.tableau.piles.iter_mut().zip(&dealt) {
            pile.push(value);
        }
        self.moves += PILES as u64;
        sink(TurnEvent::Dealt { values: dealt });

        if dealt.iter().all(|&v| v == dealt[0]) {
            for pile in &mut self.tableau.piles {
                pile.pop();
            }
            self.discarded += PILES;
            self.moves += PILES as u64;
            self.first_discard_round.get_or_insert(self.round_index + 1);
            sink(TurnEvent::Discarded { cards: dealt });
            return;
        }

        for from in 1..PILES {
            let value = dealt[from];
            if let Some(to) = dealt[..from].iter().position(|&v| v == value) {
                let card = self.tableau.piles[from].pop();
                debug_assert_eq!(card, Some(value));
                self.tableau.piles[to].push(value);
                self.moves += 1;
                sink(TurnEvent::Consolidated {
                    value,
                    from: from + 1,
                    to: to + 1,
                });
            }
        }
    }

    /// Deals out the whole hand and recombines the piles into the next hand.
    ///
    /// # Panics
    ///
    /// If the game is already complete.
    pub fn play_round<F: FnMut(TurnEvent)>(&mut self, sink: &mut F) {
        assert!(!self.is_complete(), "play_round called on a completed game");
        while self.next < self.hand.len() {
            self.deal_turn(sink);
        }
        self.finish_round();
    }

    fn finish_round(&mut self) {
        let mut hand = std::mem::take(&mut self.hand);
        self.tableau.recombine_into(self.mode, &mut hand);
        self.hand = hand;
        self.next = 0;
        self.round_index += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Completed,
    Cycled,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Completed => "completed",
            Outcome::Cycled => "cycled",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Terminal record of one game.
///
/// `rounds` counts every round played, including the round that emptied the
/// tableau or the round whose end state repeated an earlier one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GameOutcome {
    pub outcome: Outcome,
    pub rounds: u32,
    pub moves: u64,
    pub first_discard_round: Option<u32>,
    pub cycle: Option<CycleReport>,
}

impl GameOutcome {
    pub fn cycle_length(&self) -> Option<u32> {
        self.cycle.map(|c| c.cycle_length)
    }
}

impl fmt::Display for GameOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} rounds={} moves={}",
            self.outcome, self.rounds, self.moves
        )?;
        match self.first_discard_round {
            Some(r) => write!(f, " first_discard_round={r}")?,
            None => f.write_str(" first_discard_round=-")?,
        }
        if let Some(c) = self.cycle {
            write!(
                f,
                " cycle_length={} first_seen_round={}",
                c.cycle_length, c.first_seen_round
            )?;
        }
        Ok(())
    }
}

/// Callbacks for observing a game as it is played.
pub trait GameObserver {
    fn turn(&mut self, _round: u32, _event: &TurnEvent, _state: &GameState) {}
    fn round_end(&mut self, _round: u32, _hand: &[CardValue]) {}
}

/// Observer that ignores everything.
pub struct Silent;

impl GameObserver for Silent {}

/// Plays a game until every card is discarded or `detector` reports that an
/// end-of-round order has repeated. The starting deck is offered to the
/// detector as round 0.
pub fn play_game_with<D, O>(
    deck: Vec<CardValue>,
    mode: RecombineMode,
    detector: &mut D,
    observer: &mut O,
) -> Result<GameOutcome>
where
    D: CycleDetector + ?Sized,
    O: GameObserver + ?Sized,
{
    if deck.is_empty() {
        return Err(Error::EmptyDeck);
    }
    let mut state = GameState::new(deck, mode)?;
    detector.reset();
    let start = detector.record_and_check(state.hand(), 0);
    debug_assert!(start.is_none());

    loop {
        let round = state.round_index + 1;
        let mut events = Vec::with_capacity(PILES);
        while state.next < state.hand.len() {
            events.clear();
            state.deal_turn(&mut |e| events.push(e));
            for e in &events {
                observer.turn(round, e, &state);
            }
        }
        state.finish_round();
        observer.round_end(round, state.hand());

        if state.is_complete() {
            return Ok(GameOutcome {
                outcome: Outcome::Completed,
                rounds: state.round_index,
                moves: state.moves,
                first_discard_round: state.first_discard_round,
                cycle: None,
            });
        }
        if let Some(report) = detector.record_and_check(state.hand(), state.round_index) {
            return Ok(GameOutcome {
                outcome: Outcome::Cycled,
                rounds: state.round_index,
                moves: state.moves,
                first_discard_round: state.first_discard_round,
                cycle: Some(report),
            });
        }
    }
}

/// Plays a game with a pruning [`SeenLedger`] and no observer.
pub fn play_game(deck: Vec<CardValue>, mode: RecombineMode) -> Result<GameOutcome> {
    play_game_with(deck, mode, &mut SeenLedger::new(), &mut Silent)
}

/// Plays one round on a bare value sequence and returns the next hand together
/// with the number of cards discarded during the round.
pub fn round_map(seq: &[CardValue], mode: RecombineMode) -> Result<(Vec<CardValue>, usize)> {
    let mut state = GameState::new(seq.to_vec(), mode)?;
    if state.is_complete() {
        return Ok((Vec::new(), 0));
    }
    state.play_round(&mut |_| {});
    Ok((state.hand, state.discarded))
}

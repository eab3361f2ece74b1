//! Repeat detection over end-of-round value orders.

use std::borrow::Borrow;
use std::collections::HashMap;

use crate::card::CardValue;

/// An end-of-round hand, dealt-first order. Equality is element-wise on the
/// full sequence; hashing only narrows the lookup.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalState(Box<[CardValue]>);

impl CanonicalState {
    pub fn new(values: &[CardValue]) -> Self {
        CanonicalState(values.into())
    }

    pub fn values(&self) -> &[CardValue] {
        &self.0
    }
}

impl Borrow<[CardValue]> for CanonicalState {
    fn borrow(&self) -> &[CardValue] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CycleReport {
    /// Round at which the repeated state was first recorded (0 = the deck as
    /// shuffled).
    pub first_seen_round: u32,
    pub cycle_length: u32,
}

/// A hook that watches the sequence of end-of-round states of one game.
pub trait CycleDetector {
    /// Forget everything; called at the start of a game.
    fn reset(&mut self);

    /// Records `state` as seen at `round`, or reports the cycle if it has been
    /// seen before. Rounds must be strictly increasing between resets.
    fn record_and_check(&mut self, state: &[CardValue], round: u32) -> Option<CycleReport>;
}

/// Map from every recorded state to the round it was recorded at.
///
/// Hand sizes never grow, so once a round ends with fewer cards the larger
/// states can never recur. With pruning enabled those entries are dropped.
#[derive(Debug, Clone)]
pub struct SeenLedger {
    entries: HashMap<CanonicalState, u32>,
    prune: bool,
    current_len: Option<usize>,
}

impl Default for SeenLedger {
    fn default() -> Self {
        SeenLedger::new()
    }
}

impl SeenLedger {
    pub fn new() -> Self {
        SeenLedger::with_pruning(true)
    }

    pub fn with_pruning(prune: bool) -> Self {
        SeenLedger {
            entries: HashMap::new(),
            prune,
            current_len: None,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn prunes(&self) -> bool {
        self.prune
    }

    pub fn contains(&self, state: &[CardValue]) -> bool {
        self.entries.contains_key(state)
    }

    /// Drops every entry holding more than `hand_len` cards.
    pub fn prune_on_discard(&mut self, hand_len: usize) {
        self.entries
            .retain(|state, _| state.values().len() <= hand_len);
    }
}

impl CycleDetector for SeenLedger {
    fn reset(&mut self) {
        self.entries.clear();
        self.current_len = None;
    }

    fn record_and_check(&mut self, state: &[CardValue], round: u32) -> Option<CycleReport> {
        if self.prune && self.current_len.is_some_and(|len| state.len() < len) {
            self.prune_on_discard(state.len());
        }
        self.current_len = Some(state.len());

        if let Some(&first_seen_round) = self.entries.get(state) {
            return Some(CycleReport {
                first_seen_round,
                cycle_length: round - first_seen_round,
            });
        }
        self.entries.insert(CanonicalState::new(state), round);
        None
    }
}

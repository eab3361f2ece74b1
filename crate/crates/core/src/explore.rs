//! Exhaustive and sampled searches over small decks.
//!
//! The rules only ever compare values for equality, so relabelling the ranks
//! commutes with playing a round. Every deck is therefore represented by its
//! restricted growth form: the first value seen becomes label 0, the next new
//! value label 1, and so on. Searching patterns covers every deck of that
//! length.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::card::{format_values, standard_pack, CardValue, RANKS, SUITS};
use crate::cycles::{CycleDetector, SeenLedger};
use crate::engine::{GameState, RecombineMode};
use crate::error::{Error, Result};

/// Largest length searched exhaustively unless asked otherwise.
pub const DEFAULT_EXHAUSTIVE_LENGTH: usize = 12;

/// A deck in restricted growth form, at most four copies per label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern(Vec<u8>);

impl Pattern {
    pub fn new(symbols: Vec<u8>) -> Result<Self> {
        if !symbols.len().is_multiple_of(4) {
            return Err(Error::DeckLength(symbols.len()));
        }
        let mut counts = [0usize; RANKS as usize];
        let mut next_label = 0u8;
        for (i, &s) in symbols.iter().enumerate() {
            if s > next_label || s >= RANKS {
                return Err(Error::Config(format!(
                    "symbol {s} at position {i} breaks restricted growth"
                )));
            }
            if s == next_label {
                next_label += 1;
            }
            counts[usize::from(s)] += 1;
            if counts[usize::from(s)] > SUITS {
                return Err(Error::Config(format!(
                    "label {s} used more than four times"
                )));
            }
        }
        Ok(Pattern(symbols))
    }

    /// Canonical form of a deck.
    pub fn from_values(values: &[CardValue]) -> Result<Self> {
        let mut labels = [u8::MAX; RANKS as usize + 1];
        let mut next = 0u8;
        let symbols = values
            .iter()
            .map(|v| {
                let slot = &mut labels[usize::from(v.rank())];
                if *slot == u8::MAX {
                    *slot = next;
                    next += 1;
                }
                *slot
            })
            .collect();
        Pattern::new(symbols)
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Discards remove four equal values and a pack holds exactly four of
    /// each, so every state of a real game has each value zero or four times.
    pub fn reachability(&self) -> Reachability {
        let mut counts = [0usize; RANKS as usize];
        for &s in &self.0 {
            counts[usize::from(s)] += 1;
        }
        if counts.iter().all(|&c| c == 0 || c == SUITS) {
            Reachability::Unknown
        } else {
            Reachability::Unreachable
        }
    }

    /// Label `k` becomes rank `k + 1`, so patterns print as `A 2 A 2 …`.
    pub fn to_values(&self) -> Vec<CardValue> {
        self.0
            .iter()
            .map(|&s| CardValue::new(s + 1).expect("labels are below 13"))
            .collect()
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_values(&self.to_values()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Reachability {
    /// Some value has between one and three copies; no game from a full pack
    /// can get here.
    Unreachable,
    /// Every value has four copies. Whether a shuffle leads here is not
    /// checked.
    Unknown,
}

impl fmt::Display for Reachability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reachability::Unreachable => "unreachable",
            Reachability::Unknown => "reachability unknown",
        })
    }
}

/// Which decks a search covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PatternSet {
    /// Every deck with at most four copies of each value.
    #[default]
    All,
    /// Decks holding all four copies of each value present, the only shape a
    /// game dealt from a full pack can reach.
    FullQuads,
}

impl PatternSet {
    pub fn as_str(self) -> &'static str {
        match self {
            PatternSet::All => "all",
            PatternSet::FullQuads => "quads",
        }
    }
}

impl fmt::Display for PatternSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for PatternSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(PatternSet::All),
            "quads" | "full-quads" => Ok(PatternSet::FullQuads),
            other => Err(Error::Config(format!("unknown pattern set {other:?}"))),
        }
    }
}

/// Lexicographic stream of every pattern of one length.
#[derive(Debug, Clone)]
pub struct Patterns {
    current: Vec<u8>,
    counts: [u8; RANKS as usize],
    length: usize,
    set: PatternSet,
    started: bool,
    done: bool,
}

/// Every pattern of `length` cards, in lexicographic order.
pub fn enumerate_patterns(length: usize) -> Result<Patterns> {
    enumerate_patterns_in(length, PatternSet::All)
}

pub fn enumerate_patterns_in(length: usize, set: PatternSet) -> Result<Patterns> {
    if !length.is_multiple_of(4) || length > RANKS as usize * SUITS {
        return Err(Error::DeckLength(length));
    }
    let mut patterns = Patterns {
        current: Vec::with_capacity(length),
        counts: [0; RANKS as usize],
        length,
        set,
        started: false,
        done: false,
    };
    patterns.fill();
    Ok(patterns)
}

impl Patterns {
    fn labels_used(&self) -> u8 {
        self.current.iter().map(|&s| s + 1).max().unwrap_or(0)
    }

    /// Whether appending `label` still leaves a valid completion.
    fn can_place(&self, label: u8, used: u8) -> bool {
        if usize::from(self.counts[usize::from(label)]) >= SUITS {
            return false;
        }
        match self.set {
            // Free slots across all thirteen values always cover the rest.
            PatternSet::All => true,
            PatternSet::FullQuads => {
                let used = used.max(label + 1);
                let remaining = self.length - self.current.len() - 1;
                let deficit: usize = (0..used)
                    .map(|l| {
                        let c = usize::from(self.counts[usize::from(l)]) + usize::from(l == label);
                        SUITS - c
                    })
                    .sum();
                remaining >= deficit
                    && (remaining - deficit).is_multiple_of(SUITS)
                    && usize::from(used) + (remaining - deficit) / SUITS <= usize::from(RANKS)
            }
        }
    }

    fn push(&mut self, label: u8) {
        self.counts[usize::from(label)] += 1;
        self.current.push(label);
    }

    /// Appends the lexicographically smallest valid completion.
    fn fill(&mut self) {
        let mut used = self.labels_used();
        while self.current.len() < self.length {
            let label = (0..=used.min(RANKS - 1))
                .find(|&l| self.can_place(l, used))
                .expect("prefix always has a completion");
            self.push(label);
            used = used.max(label + 1);
        }
    }

    fn advance(&mut self) -> bool {
        while let Some(last) = self.current.pop() {
            self.counts[usize::from(last)] -= 1;
            let used = self.labels_used();
            let candidate = (last + 1..=used.min(RANKS - 1)).find(|&l| self.can_place(l, used));
            if let Some(label) = candidate {
                self.push(label);
                self.fill();
                return true;
            }
        }
        false
    }
}

impl Iterator for Patterns {
    type Item = Pattern;

    fn next(&mut self) -> Option<Pattern> {
        if self.done {
            return None;
        }
        if self.started && (self.current.is_empty() || !self.advance()) {
            self.done = true;
            return None;
        }
        self.started = true;
        Some(Pattern(self.current.clone()))
    }
}

/// One round applied to a bare value sequence. Returns the next hand and the
/// number of cards discarded.
pub fn round_map(seq: &[CardValue], mode: RecombineMode) -> Result<(Vec<CardValue>, usize)> {
    crate::engine::round_map(seq, mode)
}

/// Independent re-check that `pattern` survives a round unchanged with no
/// discard.
pub fn is_single_round_cycle(pattern: &Pattern, mode: RecombineMode) -> bool {
    if pattern.is_empty() {
        return false;
    }
    let values = pattern.to_values();
    let Ok(mut state) = GameState::new(values.clone(), mode) else {
        return false;
    };
    state.play_round(&mut |_| {});
    state.discarded() == 0 && state.hand() == values.as_slice()
}

fn fixed_points_of_length(
    length: usize,
    mode: RecombineMode,
    set: PatternSet,
) -> Result<Vec<Pattern>> {
    let check = |p: &Pattern| -> bool {
        let values = p.to_values();
        matches!(round_map(&values, mode), Ok((next, 0)) if next == values)
    };
    let patterns = enumerate_patterns_in(length, set)?;
    #[cfg(feature = "parallel")]
    let mut found: Vec<Pattern> = {
        use rayon::iter::{ParallelBridge, ParallelIterator};
        patterns.par_bridge().filter(check).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let mut found: Vec<Pattern> = patterns.filter(check).collect();
    found.sort();
    Ok(found)
}

/// Every pattern of length 4, 8, …, `max_length` that a round maps to itself
/// without discarding. An empty result certifies that none exist at those
/// sizes under `mode`.
pub fn find_single_round_cycles(max_length: usize, mode: RecombineMode) -> Result<Vec<Pattern>> {
    find_single_round_cycles_in(max_length, mode, PatternSet::All)
}

/// [`find_single_round_cycles`] restricted to one pattern set.
pub fn find_single_round_cycles_in(
    max_length: usize,
    mode: RecombineMode,
    set: PatternSet,
) -> Result<Vec<Pattern>> {
    if !max_length.is_multiple_of(4) {
        return Err(Error::DeckLength(max_length));
    }
    let mut found = Vec::new();
    for length in (4..=max_length).step_by(4) {
        found.extend(fixed_points_of_length(length, mode, set)?);
    }
    debug_assert!(found.iter().all(|p| is_single_round_cycle(p, mode)));
    Ok(found)
}

/// A random pattern of `length` cards. For [`PatternSet::All`] it is the
/// canonical form of the first `length` cards of a shuffled pack; for
/// [`PatternSet::FullQuads`], of all four copies of `length / 4` random
/// values, shuffled.
pub fn sample_pattern<R: rand::Rng + ?Sized>(
    length: usize,
    set: PatternSet,
    rng: &mut R,
) -> Result<Pattern> {
    if !length.is_multiple_of(4) || length > RANKS as usize * SUITS {
        return Err(Error::DeckLength(length));
    }
    match set {
        PatternSet::All => {
            let mut pack = standard_pack();
            let (head, _) = pack.partial_shuffle(rng, length);
            Pattern::from_values(head)
        }
        PatternSet::FullQuads => {
            let mut values: Vec<CardValue> = CardValue::all().collect();
            let (chosen, _) = values.partial_shuffle(rng, length / SUITS);
            let mut deck: Vec<CardValue> = chosen
                .iter()
                .flat_map(|&v| std::iter::repeat_n(v, SUITS))
                .collect();
            deck.shuffle(rng);
            Pattern::from_values(&deck)
        }
    }
}

/// Samples `samples` random patterns of `length` and keeps the verified
/// single-round cycles among them.
pub fn search_single_round_cycles(
    length: usize,
    mode: RecombineMode,
    set: PatternSet,
    samples: u64,
    seed: u64,
) -> Result<Vec<Pattern>> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let mut found = Vec::new();
    for _ in 0..samples {
        let p = sample_pattern(length, set, &mut rng)?;
        if is_single_round_cycle(&p, mode) {
            found.push(p);
        }
    }
    found.sort();
    found.dedup();
    Ok(found)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    Completed,
    Cycled {
        pre_period: u32,
        cycle_length: u32,
    },
    /// Still running when the round cap was hit.
    Unresolved,
}

impl Classification {
    pub fn cycle_length(self) -> Option<u32> {
        match self {
            Classification::Cycled { cycle_length, .. } => Some(cycle_length),
            _ => None,
        }
    }

    /// Label used for this class in `atlas.csv`.
    pub fn label(self) -> String {
        match self {
            Classification::Completed => "completed".into(),
            Classification::Cycled { cycle_length, .. } => cycle_length.to_string(),
            Classification::Unresolved => "unresolved".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitReport {
    pub pattern: Pattern,
    pub classification: Classification,
    pub rounds_to_resolution: u32,
}

/// Plays `pattern` out under `mode`, giving up after `max_rounds` rounds if a
/// cap is set.
pub fn classify(
    pattern: &Pattern,
    mode: RecombineMode,
    max_rounds: Option<u32>,
) -> Result<OrbitReport> {
    let report = |classification, rounds| OrbitReport {
        pattern: pattern.clone(),
        classification,
        rounds_to_resolution: rounds,
    };
    let mut state = GameState::new(pattern.to_values(), mode)?;
    if state.is_complete() {
        return Ok(report(Classification::Completed, 0));
    }
    let mut ledger = SeenLedger::new();
    ledger.record_and_check(state.hand(), 0);
    loop {
        if max_rounds.is_some_and(|cap| state.round_index() >= cap) {
            return Ok(report(Classification::Unresolved, state.round_index()));
        }
        state.play_round(&mut |_| {});
        let round = state.round_index();
        if state.is_complete() {
            return Ok(report(Classification::Completed, round));
        }
        if let Some(c) = ledger.record_and_check(state.hand(), round) {
            let classification = Classification::Cycled {
                pre_period: c.first_seen_round,
                cycle_length: c.cycle_length,
            };
            return Ok(report(classification, round));
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AtlasOptions {
    pub set: PatternSet,
    /// Patterns classified at most; beyond this the atlas samples.
    pub sample_budget: u64,
    pub seed: u64,
    pub max_rounds: Option<u32>,
}

impl Default for AtlasOptions {
    fn default() -> Self {
        AtlasOptions {
            set: PatternSet::All,
            sample_budget: 100_000,
            seed: 0,
            max_rounds: Some(100_000),
        }
    }
}

/// Orbit classifications for one deck length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atlas {
    pub length: usize,
    pub mode: RecombineMode,
    pub set: PatternSet,
    /// True when every pattern of the length was classified.
    pub exhaustive: bool,
    pub reports: Vec<OrbitReport>,
}

impl Atlas {
    /// Count per class, keyed by its `atlas.csv` label order: completed,
    /// then cycle lengths ascending, then unresolved.
    pub fn class_counts(&self) -> Vec<(Classification, u64)> {
        let mut completed = 0;
        let mut unresolved = 0;
        let mut cycles: BTreeMap<u32, u64> = BTreeMap::new();
        for r in &self.reports {
            match r.classification {
                Classification::Completed => completed += 1,
                Classification::Unresolved => unresolved += 1,
                Classification::Cycled { cycle_length, .. } => {
                    *cycles.entry(cycle_length).or_insert(0) += 1
                }
            }
        }
        let mut out = Vec::new();
        if completed > 0 {
            out.push((Classification::Completed, completed));
        }
        out.extend(cycles.into_iter().map(|(len, n)| {
            (
                Classification::Cycled {
                    pre_period: 0,
                    cycle_length: len,
                },
                n,
            )
        }));
        if unresolved > 0 {
            out.push((Classification::Unresolved, unresolved));
        }
        out
    }

    /// Count per cycle length; `None` counts completed games.
    pub fn cycle_length_counts(&self) -> BTreeMap<Option<u32>, u64> {
        let mut counts = BTreeMap::new();
        for r in &self.reports {
            if r.classification != Classification::Unresolved {
                *counts.entry(r.classification.cycle_length()).or_insert(0) += 1;
            }
        }
        counts
    }

    /// Cycle lengths that occur at this deck length.
    pub fn cycle_lengths(&self) -> Vec<u32> {
        self.cycle_length_counts()
            .keys()
            .filter_map(|&k| k)
            .collect()
    }
}

/// Classifies every pattern of `length` in `options.set` when there are at
/// most `options.sample_budget` of them, otherwise that many random patterns
/// drawn with [`sample_pattern`].
pub fn orbit_atlas(length: usize, mode: RecombineMode, options: &AtlasOptions) -> Result<Atlas> {
    let budget = usize::try_from(options.sample_budget).unwrap_or(usize::MAX);
    let mut patterns: Vec<Pattern> = enumerate_patterns_in(length, options.set)?
        .take(budget.saturating_add(1))
        .collect();
    let exhaustive = patterns.len() <= budget;
    if !exhaustive {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(options.seed);
        patterns = (0..budget)
            .map(|_| sample_pattern(length, options.set, &mut rng))
            .collect::<Result<_>>()?;
    }
    let classify_one = |p: &Pattern| classify(p, mode, options.max_rounds);
    #[cfg(feature = "parallel")]
    let reports = {
        use rayon::prelude::*;
        patterns
            .par_iter()
            .map(classify_one)
            .collect::<Result<Vec<_>>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let reports = patterns
        .iter()
        .map(classify_one)
        .collect::<Result<Vec<_>>>()?;
    Ok(Atlas {
        length,
        mode,
        set: options.set,
        exhaustive,
        reports,
    })
}

/// Writes `length,mode,cycle_length,count` rows. Completed orbits are
/// counted under the `cycle_length` value `completed`, capped ones under
/// `unresolved`.
pub fn write_atlas_csv<W: Write>(atlases: &[Atlas], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["length", "mode", "cycle_length", "count"])?;
    for atlas in atlases {
        for (class, count) in atlas.class_counts() {
            writer.write_record([
                atlas.length.to_string(),
                atlas.mode.to_string(),
                class.label(),
                count.to_string(),
            ])?;
        }
    }
    writer.flush()?;
    Ok(())
}

/// Result of a single-round cycle search under one mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPointSearch {
    pub mode: RecombineMode,
    pub set: PatternSet,
    /// Largest length searched exhaustively (0 when none).
    pub exhaustive_max: usize,
    /// Lengths probed by random sampling, with the sample count.
    pub sampled: Vec<(usize, u64)>,
    pub found: Vec<Pattern>,
}

/// Writes the fixed-point certificate. Comment lines start with `#`; every
/// other line is one pattern in rank tokens. No pattern lines means none
/// exist within the stated exhaustive bound (and none turned up in sampling).
pub fn write_fixed_points<W: Write>(searches: &[FixedPointSearch], mut out: W) -> Result<()> {
    writeln!(
        out,
        "# single-round cycles (round maps the deck to itself, no discard)"
    )?;
    for search in searches {
        write!(
            out,
            "# mode={} set={} exhaustive_lengths=4..={}",
            search.mode, search.set, search.exhaustive_max
        )?;
        if !search.sampled.is_empty() {
            let sampled: Vec<String> = search
                .sampled
                .iter()
                .map(|(len, n)| format!("{len}x{n}"))
                .collect();
            write!(out, " sampled={}", sampled.join(","))?;
        }
        writeln!(out, " found={}", search.found.len())?;
        for reach in [Reachability::Unknown, Reachability::Unreachable] {
            let group: Vec<&Pattern> = search
                .found
                .iter()
                .filter(|p| p.reachability() == reach)
                .collect();
            if group.is_empty() {
                continue;
            }
            writeln!(out, "# mode={} {}", search.mode, reach)?;
            for p in group {
                writeln!(out, "{p}")?;
            }
        }
    }
    Ok(())
}

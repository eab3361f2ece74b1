//! Aggregates over game results: completion rate with a batch-means
//! confidence interval, mean rounds/moves/first-discard round, the three
//! frequency distributions, and a play-time estimate.
//!
//! Sums are kept as integers so every aggregate is independent of the order
//! in which results arrive.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;
use serde_json::value::RawValue;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::engine::{Outcome, RecombineMode};
use crate::error::{Error, Result};
use crate::simulate::{ExperimentConfig, GameResult, GENERATOR};

pub const DEFAULT_ALPHA: f64 = 0.05;
pub const DEFAULT_MOVES_BIN_WIDTH: u64 = 250;

/// Seconds per card moved, and per recombination of the piles.
pub const SECONDS_PER_MOVE: f64 = 1.0;
pub const SECONDS_PER_RECOMBINE: f64 = 5.0;

/// Integer running totals. `merge` is associative and commutative.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tally {
    pub games: u64,
    pub completed: u64,
    pub cycled: u64,
    pub rounds: u64,
    pub moves: u64,
    pub first_discard_rounds: u64,
    pub with_discard: u64,
}

impl Tally {
    pub fn add(&mut self, result: &GameResult) {
        self.games += 1;
        match result.outcome {
            Outcome::Completed => self.completed += 1,
            Outcome::Cycled => self.cycled += 1,
        }
        self.rounds += u64::from(result.rounds);
        self.moves += result.moves;
        if let Some(r) = result.first_discard_round {
            self.first_discard_rounds += u64::from(r);
            self.with_discard += 1;
        }
    }

    pub fn merge(&mut self, other: &Tally) {
        self.games += other.games;
        self.completed += other.completed;
        self.cycled += other.cycled;
        self.rounds += other.rounds;
        self.moves += other.moves;
        self.first_discard_rounds += other.first_discard_rounds;
        self.with_discard += other.with_discard;
    }

    pub fn from_results<'a>(results: impl IntoIterator<Item = &'a GameResult>) -> Tally {
        let mut tally = Tally::default();
        for r in results {
            tally.add(r);
        }
        tally
    }

    fn ratio(num: u64, den: u64) -> Option<f64> {
        (den > 0).then(|| num as f64 / den as f64)
    }

    pub fn mean_rounds(&self) -> Option<f64> {
        Tally::ratio(self.rounds, self.games)
    }

    pub fn mean_moves(&self) -> Option<f64> {
        Tally::ratio(self.moves, self.games)
    }

    pub fn mean_first_discard_round(&self) -> Option<f64> {
        Tally::ratio(self.first_discard_rounds, self.with_discard)
    }
}

/// Two-sided Student-t quantile `t_{1-alpha/2}` with `df` degrees of freedom.
pub fn t_quantile(alpha: f64, df: u64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Config(format!("alpha {alpha} must lie in (0, 1)")));
    }
    let dist = StudentsT::new(0.0, 1.0, df as f64)
        .map_err(|e| Error::Config(format!("t distribution: {e}")))?;
    Ok(dist.inverse_cdf(1.0 - alpha / 2.0))
}

/// Mean completion percentage and the half-width of its confidence interval,
/// treating each batch's completion count as one normally distributed
/// observation. Returns `(mean_pct, halfwidth_pct)`.
pub fn completion_ci(batch_counts: &[u64], batch_size: u64, alpha: f64) -> Result<(f64, f64)> {
    let t = t_quantile(alpha, batch_counts.len().saturating_sub(1).max(1) as u64)?;
    completion_ci_with_quantile(batch_counts, batch_size, t)
}

/// As [`completion_ci`], with the t quantile supplied by the caller.
pub fn completion_ci_with_quantile(
    batch_counts: &[u64],
    batch_size: u64,
    t: f64,
) -> Result<(f64, f64)> {
    let n = batch_counts.len();
    if n < 2 {
        return Err(Error::TooFewBatches(n));
    }
    if batch_size == 0 {
        return Err(Error::Config("batch size must be positive".into()));
    }
    if let Some(&c) = batch_counts.iter().find(|&&c| c > batch_size) {
        return Err(Error::Config(format!(
            "batch count {c} exceeds batch size {batch_size}"
        )));
    }
    let n = n as u128;
    let sum: u128 = batch_counts.iter().map(|&c| u128::from(c)).sum();
    let sum_sq: u128 = batch_counts
        .iter()
        .map(|&c| u128::from(c) * u128::from(c))
        .sum();
    // n·Σx² − (Σx)² is exact in integers; the sample variance is that over n(n−1).
    let spread = n * sum_sq - sum * sum;
    let variance = spread as f64 / (n * (n - 1)) as f64;

    let mean_pct = 100.0 * sum as f64 / (n as f64 * batch_size as f64);
    let halfwidth = t * variance.sqrt() / (n as f64).sqrt();
    Ok((mean_pct, 100.0 * halfwidth / batch_size as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HistogramKind {
    Rounds,
    Moves,
    CycleLength,
}

impl HistogramKind {
    /// Output file name for this distribution.
    pub fn file_name(self) -> &'static str {
        match self {
            HistogramKind::Rounds => "rounds.csv",
            HistogramKind::Moves => "moves.csv",
            HistogramKind::CycleLength => "cycle_lengths.csv",
        }
    }
}

/// Counts per bin; a bin is labelled by its lower bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    pub kind: HistogramKind,
    pub bin_width: u64,
    bins: BTreeMap<u64, u64>,
}

impl Histogram {
    pub fn new(kind: HistogramKind, bin_width: u64) -> Self {
        assert!(bin_width > 0, "bin width must be positive");
        Histogram {
            kind,
            bin_width,
            bins: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, value: u64) {
        *self
            .bins
            .entry(value / self.bin_width * self.bin_width)
            .or_insert(0) += 1;
    }

    /// Non-empty bins in ascending order.
    pub fn bins(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.bins.iter().map(|(&b, &c)| (b, c))
    }

    pub fn count(&self, bin: u64) -> u64 {
        self.bins.get(&bin).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.bins.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    /// Label of the most populated bin; the smallest label wins ties.
    pub fn mode(&self) -> Option<u64> {
        self.bins
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .map(|(&b, _)| b)
    }

    /// Writes `bin,count` rows, one per non-empty bin.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(["bin", "count"])?;
        for (bin, count) in self.bins() {
            writer.write_record([bin.to_string(), count.to_string()])?;
        }
        writer.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histograms {
    pub rounds: Histogram,
    pub moves: Histogram,
    pub cycle_length: Histogram,
}

impl Histograms {
    pub fn iter(&self) -> impl Iterator<Item = &Histogram> {
        [&self.rounds, &self.moves, &self.cycle_length].into_iter()
    }
}

pub fn build_histograms(results: &[GameResult], moves_bin_width: u64) -> Result<Histograms> {
    if moves_bin_width == 0 {
        return Err(Error::Config("moves bin width must be positive".into()));
    }
    let mut rounds = Histogram::new(HistogramKind::Rounds, 1);
    let mut moves = Histogram::new(HistogramKind::Moves, moves_bin_width);
    let mut cycle_length = Histogram::new(HistogramKind::CycleLength, 1);
    for r in results {
        rounds.add(u64::from(r.rounds));
        moves.add(r.moves);
        if let Some(len) = r.cycle_length {
            cycle_length.add(u64::from(len));
        }
    }
    Ok(Histograms {
        rounds,
        moves,
        cycle_length,
    })
}

/// Headline numbers for a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub games: u64,
    pub batches: u64,
    pub completed: u64,
    pub cycled: u64,
    pub completion_pct: f64,
    /// `None` when there are fewer than two batches.
    pub ci_halfwidth_pct: Option<f64>,
    pub alpha: f64,
    pub batch_completions: Vec<u64>,
    pub mean_rounds: f64,
    pub mean_first_discard_round: Option<f64>,
    /// Games that ended without ever discarding; left out of the
    /// first-discard mean.
    pub first_discard_excluded: u64,
    pub mean_moves: f64,
    pub recombine_mode: RecombineMode,
    pub master_seed: u64,
}

/// Summarises a full run. `results` must hold every game of `config`.
pub fn summarize(results: &[GameResult], config: &ExperimentConfig, alpha: f64) -> Result<Summary> {
    config.validate()?;
    if results.len() as u64 != config.games {
        return Err(Error::Config(format!(
            "expected {} results, got {}",
            config.games,
            results.len()
        )));
    }
    let mut batch_completions = vec![0u64; config.batches as usize];
    let mut tally = Tally::default();
    for r in results {
        if r.game_index >= config.games {
            return Err(Error::Config(format!(
                "game index {} outside run of {} games",
                r.game_index, config.games
            )));
        }
        tally.add(r);
        if r.outcome == Outcome::Completed {
            batch_completions[config.batch_of(r.game_index) as usize] += 1;
        }
    }
    let ci_halfwidth_pct = if config.batches >= 2 {
        Some(completion_ci(&batch_completions, config.batch_size(), alpha)?.1)
    } else {
        t_quantile(alpha, 1)?;
        None
    };
    Ok(Summary {
        games: tally.games,
        batches: config.batches,
        completed: tally.completed,
        cycled: tally.cycled,
        completion_pct: 100.0 * tally.completed as f64 / tally.games as f64,
        ci_halfwidth_pct,
        alpha,
        batch_completions,
        mean_rounds: tally.mean_rounds().unwrap_or(0.0),
        mean_first_discard_round: tally.mean_first_discard_round(),
        first_discard_excluded: tally.games - tally.with_discard,
        mean_moves: tally.mean_moves().unwrap_or(0.0),
        recombine_mode: config.recombine_mode,
        master_seed: config.master_seed,
    })
}

/// Wall-clock estimate in seconds for playing an average game by hand.
pub fn estimate_play_time(summary: &Summary) -> f64 {
    play_time_seconds(summary.mean_moves, summary.mean_rounds)
}

pub fn play_time_seconds(mean_moves: f64, mean_rounds: f64) -> f64 {
    mean_moves * SECONDS_PER_MOVE + mean_rounds * SECONDS_PER_RECOMBINE
}

fn fixed(value: f64, places: usize) -> Box<RawValue> {
    RawValue::from_string(format!("{value:.places$}")).expect("formatted float is valid JSON")
}

#[derive(Serialize)]
struct SummaryJson<'a> {
    tool: &'a str,
    version: &'a str,
    generator: &'a str,
    master_seed: u64,
    recombine_mode: RecombineMode,
    games: u64,
    batches: u64,
    alpha: Box<RawValue>,
    completed: u64,
    cycled: u64,
    completion_pct: Box<RawValue>,
    ci_halfwidth_pct: Option<Box<RawValue>>,
    batch_completions: &'a [u64],
    mean_rounds: Box<RawValue>,
    mean_first_discard_round: Option<Box<RawValue>>,
    first_discard_excluded: u64,
    mean_moves: Box<RawValue>,
    play_time_seconds: Box<RawValue>,
}

impl Summary {
    /// Pretty JSON with a fixed key order: percentages to two decimals, means
    /// and seconds to one.
    pub fn to_json(&self) -> Result<String> {
        let doc = SummaryJson {
            tool: "pmotion",
            version: env!("CARGO_PKG_VERSION"),
            generator: GENERATOR,
            master_seed: self.master_seed,
            recombine_mode: self.recombine_mode,
            games: self.games,
            batches: self.batches,
            alpha: RawValue::from_string(format_alpha(self.alpha))?,
            completed: self.completed,
            cycled: self.cycled,
            completion_pct: fixed(self.completion_pct, 2),
            ci_halfwidth_pct: self.ci_halfwidth_pct.map(|h| fixed(h, 2)),
            batch_completions: &self.batch_completions,
            mean_rounds: fixed(self.mean_rounds, 1),
            mean_first_discard_round: self.mean_first_discard_round.map(|m| fixed(m, 1)),
            first_discard_excluded: self.first_discard_excluded,
            mean_moves: fixed(self.mean_moves, 1),
            play_time_seconds: fixed(estimate_play_time(self), 1),
        };
        let mut text = serde_json::to_string_pretty(&doc)?;
        text.push('\n');
        Ok(text)
    }
}

fn format_alpha(alpha: f64) -> String {
    // Shortest representation that round-trips, always with a decimal point.
    let text = format!("{alpha}");
    if text.contains('.') || text.contains('e') {
        text
    } else {
        format!("{text}.0")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn result(
        index: u64,
        outcome: Outcome,
        rounds: u32,
        moves: u64,
        fd: Option<u32>,
    ) -> GameResult {
        GameResult {
            game_index: index,
            outcome,
            rounds,
            moves,
            first_discard_round: fd,
            cycle_length: (outcome == Outcome::Cycled).then_some(2),
        }
    }

    #[test]
    fn ci_zero_variance() {
        let (mean, half) = completion_ci(&[500; 10], 1000, 0.05).unwrap();
        assert_eq!(mean, 50.0);
        assert_eq!(half, 0.0);
    }

    #[test]
    fn ci_needs_two_batches() {
        assert!(matches!(
            completion_ci(&[500], 1000, 0.05),
            Err(Error::TooFewBatches(1))
        ));
        assert!(completion_ci(&[], 1000, 0.05).is_err());
        assert!(completion_ci(&[1001, 3], 1000, 0.05).is_err());
        assert!(completion_ci(&[1, 3], 1000, 1.5).is_err());
    }

    #[test]
    fn t_quantile_matches_tables() {
        // Two-sided 95% critical values.
        assert!((t_quantile(0.05, 9).unwrap() - 2.262).abs() < 5e-4);
        assert!((t_quantile(0.05, 1).unwrap() - 12.706).abs() < 5e-3);
        assert!((t_quantile(0.01, 9).unwrap() - 3.250).abs() < 5e-4);
    }

    #[test]
    fn wider_interval_at_smaller_alpha() {
        let counts = [550, 540, 560, 545, 535, 555, 548, 552, 544, 556];
        let (_, h05) = completion_ci(&counts, 1000, 0.05).unwrap();
        let (_, h01) = completion_ci(&counts, 1000, 0.01).unwrap();
        assert!(h01 > h05);
    }

    #[test]
    fn play_time_formula() {
        assert_eq!(play_time_seconds(6201.0, 128.0), 6841.0);
        assert_eq!(play_time_seconds(0.0, 0.0), 0.0);
        assert_eq!(play_time_seconds(100.0, 10.0), 150.0);
        assert!(play_time_seconds(6201.0, 128.0) < 7200.0);
    }

    #[test]
    fn histogram_binning() {
        let results = [
            result(0, Outcome::Completed, 1, 8, Some(1)),
            result(1, Outcome::Cycled, 3, 260, None),
            result(2, Outcome::Cycled, 3, 499, Some(2)),
        ];
        let h = build_histograms(&results, 250).unwrap();
        assert_eq!(h.rounds.bins().collect::<Vec<_>>(), vec![(1, 1), (3, 2)]);
        assert_eq!(h.moves.bins().collect::<Vec<_>>(), vec![(0, 1), (250, 2)]);
        assert_eq!(h.cycle_length.bins().collect::<Vec<_>>(), vec![(2, 2)]);
        assert_eq!(h.rounds.mode(), Some(3));
        assert!(build_histograms(&results, 0).is_err());

        let one = build_histograms(&results[..1], 250).unwrap();
        assert_eq!(one.rounds.bins().collect::<Vec<_>>(), vec![(1, 1)]);
        assert!(one.cycle_length.is_empty());
    }

    #[test]
    fn histogram_csv_layout() {
        let mut h = Histogram::new(HistogramKind::Rounds, 1);
        for v in [4, 2, 4] {
            h.add(v);
        }
        let mut out = Vec::new();
        h.write_csv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "bin,count\n2,1\n4,2\n");
    }

    #[test]
    fn summary_excludes_games_without_discards() {
        let config = ExperimentConfig {
            games: 4,
            batches: 2,
            master_seed: 1,
            recombine_mode: RecombineMode::Flip,
        };
        let results = [
            result(0, Outcome::Completed, 10, 400, Some(4)),
            result(1, Outcome::Cycled, 20, 800, None),
            result(2, Outcome::Completed, 30, 1200, Some(8)),
            result(3, Outcome::Completed, 40, 1600, Some(9)),
        ];
        let s = summarize(&results, &config, 0.05).unwrap();
        assert_eq!(s.completed, 3);
        assert_eq!(s.cycled, 1);
        assert_eq!(s.batch_completions, vec![1, 2]);
        assert_eq!(s.completion_pct, 75.0);
        assert_eq!(s.mean_rounds, 25.0);
        assert_eq!(s.mean_moves, 1000.0);
        assert_eq!(s.mean_first_discard_round, Some(7.0));
        assert_eq!(s.first_discard_excluded, 1);
        assert!(s.ci_halfwidth_pct.unwrap() > 0.0);

        assert!(summarize(&results[..3], &config, 0.05).is_err());
    }

    #[test]
    fn json_has_fixed_precision() {
        let config = ExperimentConfig {
            games: 2,
            batches: 1,
            master_seed: 5,
            recombine_mode: RecombineMode::NoFlip,
        };
        let results = [
            result(0, Outcome::Completed, 10, 401, Some(4)),
            result(1, Outcome::Completed, 20, 800, Some(3)),
        ];
        let json = summarize(&results, &config, 0.05)
            .unwrap()
            .to_json()
            .unwrap();
        assert!(json.contains("\"completion_pct\": 100.00,"));
        assert!(json.contains("\"ci_halfwidth_pct\": null,"));
        assert!(json.contains("\"mean_moves\": 600.5,"));
        assert!(json.contains("\"mean_first_discard_round\": 3.5,"));
        assert!(json.contains("\"alpha\": 0.05,"));
        assert!(json.contains("\"recombine_mode\": \"noflip\""));
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["games"], 2);
    }
}

//! The raw per-game results file written by a simulation run.
//!
//! A few `# key=value` comment lines echo the run configuration, followed by
//! a CSV table with one row per game:
//!
//! ```text
//! # tool=pmotion
//! # version=0.1.0
//! # generator=xoshiro256++/splitmix64(seed,index)
//! # master_seed=42
//! # recombine_mode=flip
//! # games=10000
//! # batches=10
//! game_index,outcome,rounds,moves,first_discard_round,cycle_length
//! 0,completed,92,4507,15,
//! ```

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::simulate::{ExperimentConfig, GameResult, GENERATOR};
use crate::stats::{build_histograms, summarize};

pub const RESULTS_FILE: &str = "results.csv";
pub const SUMMARY_FILE: &str = "summary.json";

/// Every file a simulation run produces, as `(file name, contents)` in a
/// fixed order: summary, the three histograms, then the raw results.
pub fn render_run(
    config: &ExperimentConfig,
    results: &[GameResult],
    moves_bin_width: u64,
    alpha: f64,
) -> Result<Vec<(&'static str, Vec<u8>)>> {
    let summary = summarize(results, config, alpha)?;
    let mut files = vec![(SUMMARY_FILE, summary.to_json()?.into_bytes())];
    for histogram in build_histograms(results, moves_bin_width)?.iter() {
        let mut buf = Vec::new();
        histogram.write_csv(&mut buf)?;
        files.push((histogram.kind.file_name(), buf));
    }
    let mut buf = Vec::new();
    write_results(config, results, &mut buf)?;
    files.push((RESULTS_FILE, buf));
    Ok(files)
}

pub fn write_results<W: Write>(
    config: &ExperimentConfig,
    results: &[GameResult],
    mut out: W,
) -> Result<()> {
    writeln!(out, "# tool=pmotion")?;
    writeln!(out, "# version={}", env!("CARGO_PKG_VERSION"))?;
    writeln!(out, "# generator={GENERATOR}")?;
    writeln!(out, "# master_seed={}", config.master_seed)?;
    writeln!(out, "# recombine_mode={}", config.recombine_mode)?;
    writeln!(out, "# games={}", config.games)?;
    writeln!(out, "# batches={}", config.batches)?;
    let mut csv = csv::Writer::from_writer(out);
    for result in results {
        csv.serialize(result)?;
    }
    csv.flush()?;
    Ok(())
}

fn parse_field<T: std::str::FromStr>(line: u64, key: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| Error::Parse {
        line,
        message: format!("bad value for {key}: {value:?}"),
    })
}

/// Reads a results file back. The configuration comes from the comment
/// header; rows must cover game indices `0..games` in order.
pub fn read_results<R: BufRead>(input: R) -> Result<(ExperimentConfig, Vec<GameResult>)> {
    let mut text = String::new();
    let mut input = input;
    input.read_to_string(&mut text)?;

    let mut seed = None;
    let mut mode = None;
    let mut games = None;
    let mut batches = None;
    for (i, line) in text.lines().enumerate() {
        let Some(comment) = line.strip_prefix('#') else {
            break;
        };
        let line_no = i as u64 + 1;
        let Some((key, value)) = comment.trim().split_once('=') else {
            continue;
        };
        match key {
            "master_seed" => seed = Some(parse_field(line_no, key, value)?),
            "recombine_mode" => mode = Some(parse_field(line_no, key, value)?),
            "games" => games = Some(parse_field(line_no, key, value)?),
            "batches" => batches = Some(parse_field(line_no, key, value)?),
            _ => {}
        }
    }
    let missing = |key: &str| Error::Parse {
        line: 0,
        message: format!("header is missing {key}"),
    };
    let config = ExperimentConfig {
        games: games.ok_or_else(|| missing("games"))?,
        batches: batches.ok_or_else(|| missing("batches"))?,
        master_seed: seed.ok_or_else(|| missing("master_seed"))?,
        recombine_mode: mode.ok_or_else(|| missing("recombine_mode"))?,
    };
    config.validate()?;

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut results = Vec::new();
    for record in reader.deserialize::<GameResult>() {
        let result = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        if result.game_index != results.len() as u64 {
            return Err(Error::Parse {
                line: reader.position().line(),
                message: format!(
                    "expected game_index {}, found {}",
                    results.len(),
                    result.game_index
                ),
            });
        }
        results.push(result);
    }
    if results.len() as u64 != config.games {
        return Err(Error::Parse {
            line: reader.position().line(),
            message: format!(
                "header says {} games, found {}",
                config.games,
                results.len()
            ),
        });
    }
    Ok((config, results))
}

//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export has a plain Rust counterpart returning `Result<String, String>`
//! so it can be tested natively; the exports only convert errors.

use pmotion_core::card::validate_deck;
use pmotion_core::explore::{classify, Classification, Pattern};
use pmotion_core::simulate::{deck_for, run_experiment};
use pmotion_core::stats::{build_histograms, summarize, Histogram, DEFAULT_ALPHA};
use pmotion_core::trace::write_trace;
use pmotion_core::{
    format_values, parse_values, round_map, CardValue, ExperimentConfig, RecombineMode,
};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Rounds listed in an orbit before the listing is cut short.
pub const ORBIT_LISTING_LIMIT: usize = 200;

/// Largest run the page may request.
pub const MAX_DEMO_GAMES: u64 = 20_000;

fn mode(text: &str) -> Result<RecombineMode, String> {
    text.parse().map_err(|e: pmotion_core::Error| e.to_string())
}

fn deck(text: &str) -> Result<Vec<CardValue>, String> {
    let deck = parse_values(text).map_err(|e| e.to_string())?;
    validate_deck(&deck).map_err(|e| e.to_string())?;
    Ok(deck)
}

fn trace(deck: Vec<CardValue>, mode_name: &str, verbose: bool) -> Result<String, String> {
    let mut buf = Vec::new();
    write_trace(deck, mode(mode_name)?, verbose, &mut buf).map_err(|e| e.to_string())?;
    String::from_utf8(buf).map_err(|e| e.to_string())
}

/// Trace of game `index` from the run seeded with `seed`.
pub fn replay_seeded(
    seed: u64,
    index: u64,
    mode_name: &str,
    verbose: bool,
) -> Result<String, String> {
    let body = trace(deck_for(seed, index), mode_name, verbose)?;
    Ok(format!("# replay seed={seed} index={index}\n{body}"))
}

/// Trace of a deck typed as rank tokens.
pub fn replay_deck(deck_text: &str, mode_name: &str, verbose: bool) -> Result<String, String> {
    trace(deck(deck_text)?, mode_name, verbose)
}

fn bins(histogram: &Histogram) -> Value {
    histogram
        .bins()
        .map(|(bin, count)| json!([bin, count]))
        .collect()
}

/// Summary plus the three histograms of a seeded run, as JSON.
pub fn experiment_json(
    games: u64,
    batches: u64,
    seed: u64,
    mode_name: &str,
    moves_bin_width: u64,
) -> Result<String, String> {
    if games > MAX_DEMO_GAMES {
        return Err(format!("at most {MAX_DEMO_GAMES} games in the demo"));
    }
    let config = ExperimentConfig {
        games,
        batches,
        master_seed: seed,
        recombine_mode: mode(mode_name)?,
    };
    let results = run_experiment(&config).map_err(|e| e.to_string())?;
    let summary = summarize(&results, &config, DEFAULT_ALPHA)
        .and_then(|s| s.to_json())
        .map_err(|e| e.to_string())?;
    let summary: Value = serde_json::from_str(&summary).map_err(|e| e.to_string())?;
    let h = build_histograms(&results, moves_bin_width).map_err(|e| e.to_string())?;
    let out = json!({
        "summary": summary,
        "rounds": bins(&h.rounds),
        "moves": bins(&h.moves),
        "cycle_lengths": bins(&h.cycle_length),
        "moves_bin_width": moves_bin_width,
    });
    Ok(out.to_string())
}

/// Follows a deck round by round until it empties or repeats.
pub fn orbit_json(deck_text: &str, mode_name: &str) -> Result<String, String> {
    let mode = mode(mode_name)?;
    let start = deck(deck_text)?;
    if start.is_empty() {
        return Err("empty deck".into());
    }
    let pattern = Pattern::from_values(&start).map_err(|e| e.to_string())?;
    let report = classify(&pattern, mode, Some(100_000)).map_err(|e| e.to_string())?;

    let mut states = vec![format_values(&start)];
    let mut discards = Vec::new();
    let mut hand = start;
    let shown = (report.rounds_to_resolution as usize).min(ORBIT_LISTING_LIMIT);
    for _ in 0..shown {
        let (next, discarded) = round_map(&hand, mode).map_err(|e| e.to_string())?;
        discards.push(discarded);
        states.push(format_values(&next));
        hand = next;
    }
    let (outcome, pre_period, cycle_length) = match report.classification {
        Classification::Completed => ("completed", None, None),
        Classification::Cycled {
            pre_period,
            cycle_length,
        } => ("cycled", Some(pre_period), Some(cycle_length)),
        Classification::Unresolved => ("unresolved", None, None),
    };
    let out = json!({
        "pattern": pattern.to_string(),
        "reachability": pattern.reachability().to_string(),
        "outcome": outcome,
        "pre_period": pre_period,
        "cycle_length": cycle_length,
        "rounds": report.rounds_to_resolution,
        "states": states,
        "discards": discards,
        "truncated": (report.rounds_to_resolution as usize) > ORBIT_LISTING_LIMIT,
    });
    Ok(out.to_string())
}

fn js(result: Result<String, String>) -> Result<String, JsError> {
    result.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = replaySeeded)]
pub fn replay_seeded_js(
    seed: u64,
    index: u64,
    mode: &str,
    verbose: bool,
) -> Result<String, JsError> {
    js(replay_seeded(seed, index, mode, verbose))
}

#[wasm_bindgen(js_name = replayDeck)]
pub fn replay_deck_js(deck: &str, mode: &str, verbose: bool) -> Result<String, JsError> {
    js(replay_deck(deck, mode, verbose))
}

#[wasm_bindgen(js_name = runExperiment)]
pub fn run_experiment_js(
    games: u32,
    batches: u32,
    seed: u64,
    mode: &str,
    moves_bin_width: u32,
) -> Result<String, JsError> {
    js(experiment_json(
        games.into(),
        batches.into(),
        seed,
        mode,
        moves_bin_width.into(),
    ))
}

#[wasm_bindgen(js_name = followOrbit)]
pub fn follow_orbit_js(deck: &str, mode: &str) -> Result<String, JsError> {
    js(orbit_json(deck, mode))
}

use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicU64, Ordering};

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use pmotion_core::card::validate_deck;
use pmotion_core::explore::{
    find_single_round_cycles_in, orbit_atlas, search_single_round_cycles, write_atlas_csv,
    write_fixed_points, AtlasOptions, FixedPointSearch, PatternSet, DEFAULT_EXHAUSTIVE_LENGTH,
};
use pmotion_core::results::{read_results, render_run, SUMMARY_FILE};
use pmotion_core::simulate::{
    deck_for, run_experiment_with, RunOptions, DEFAULT_BATCHES, DEFAULT_GAMES, DEFAULT_SEED,
};
use pmotion_core::stats::{summarize, DEFAULT_ALPHA, DEFAULT_MOVES_BIN_WIDTH};
use pmotion_core::trace::write_trace;
use pmotion_core::{parse_values, CardValue, ExperimentConfig, RecombineMode};

/// Simulator and analysis toolkit for the Perpetual Motion solitaire.
#[derive(Parser)]
#[command(name = "pmotion", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play a seeded batch of shuffled games and write summary and histograms.
    Simulate(SimulateArgs),
    /// Recompute summary.json from a raw results file.
    Analyze(AnalyzeArgs),
    /// Print the turn-by-turn trace of one game.
    Replay(ReplayArgs),
    /// Search small decks for single-round cycles and tabulate orbit lengths.
    Explore(ExploreArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Flip,
    Noflip,
}

impl From<Mode> for RecombineMode {
    fn from(mode: Mode) -> Self {
        match mode {
            Mode::Flip => RecombineMode::Flip,
            Mode::Noflip => RecombineMode::NoFlip,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeChoice {
    Flip,
    Noflip,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum SetChoice {
    /// Every canonical pattern with at most four copies of a value.
    All,
    /// Only patterns holding all four copies of each value present.
    Quads,
}

#[derive(Args)]
struct SimulateArgs {
    /// Number of games to play.
    #[arg(long, default_value_t = DEFAULT_GAMES)]
    games: u64,
    /// Number of equal batches for the confidence interval; must divide --games.
    #[arg(long, default_value_t = DEFAULT_BATCHES)]
    batches: u64,
    /// Master seed; game i is shuffled from a generator seeded by (seed, i).
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Order in which the recombined piles are dealt next round.
    #[arg(long, value_enum, default_value = "flip")]
    recombine: Mode,
    /// Bin width of moves.csv.
    #[arg(long, default_value_t = DEFAULT_MOVES_BIN_WIDTH)]
    moves_bin_width: u64,
    /// Significance level of the completion-rate confidence interval.
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long)]
    workers: Option<usize>,
    /// Do not print the progress counter.
    #[arg(long, short)]
    quiet: bool,
    /// Output directory; created if missing.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Raw results file written by `simulate` (results.csv).
    #[arg(long = "in")]
    input: PathBuf,
    /// Significance level of the completion-rate confidence interval.
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    /// Directory for summary.json; prints to standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReplayArgs {
    /// Master seed of the run.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Index of the game within the run.
    #[arg(long, default_value_t = 0)]
    index: u64,
    /// Order in which the recombined piles are dealt next round.
    #[arg(long, value_enum, default_value = "flip")]
    recombine: Mode,
    /// Print every deal, move and discard, not just the end of each round.
    #[arg(long, short)]
    verbose: bool,
    /// Play this deck instead of a shuffled one (tokens A 2..9 T J Q K).
    #[arg(long, hide = true, value_parser = parse_deck)]
    deck: Option<Deck>,
}

#[derive(Clone)]
struct Deck(Vec<CardValue>);

#[derive(Args)]
struct ExploreArgs {
    /// Exhaustive search bound in cards (a multiple of 4). Lengths above 12
    /// are only practical with --set quads.
    #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_LENGTH, value_parser = parse_length)]
    max_length: usize,
    /// Recombination mode(s) to explore.
    #[arg(long, value_enum, default_value = "both")]
    mode: ModeChoice,
    /// Largest number of patterns classified per atlas length; longer
    /// lengths are sampled.
    #[arg(long, default_value_t = AtlasOptions::default().sample_budget)]
    budget: u64,
    /// Pattern family for the fixed-point search and the atlas.
    #[arg(long, value_enum, default_value = "all")]
    set: SetChoice,
    /// Seed for sampled atlas rows and random fixed-point searches.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also test random patterns of this length for fixed points (repeatable).
    #[arg(long, value_parser = parse_length)]
    sample_length: Vec<usize>,
    /// Random patterns tried per --sample-length.
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    /// Output directory; created if missing.
    #[arg(long)]
    out: PathBuf,
}

fn parse_deck(text: &str) -> Result<Deck, String> {
    let deck = parse_values(text).map_err(|e| e.to_string())?;
    validate_deck(&deck).map_err(|e| e.to_string())?;
    Ok(Deck(deck))
}

fn parse_length(text: &str) -> Result<usize, String> {
    let n: usize = text.parse().map_err(|_| format!("not a number: {text}"))?;
    if n == 0 || !n.is_multiple_of(4) || n > 52 {
        return Err("must be a positive multiple of 4, at most 52".into());
    }
    Ok(n)
}

fn usage_error(message: impl std::fmt::Display) -> ! {
    Cli::command()
        .error(ErrorKind::ValueValidation, message)
        .exit()
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn simulate(args: SimulateArgs) -> Result<()> {
    let config = ExperimentConfig {
        games: args.games,
        batches: args.batches,
        master_seed: args.seed,
        recombine_mode: args.recombine.into(),
    };
    if let Err(e) = config.validate() {
        usage_error(e);
    }
    if args.moves_bin_width == 0 {
        usage_error("--moves-bin-width must be positive");
    }
    if !(args.alpha > 0.0 && args.alpha < 1.0) {
        usage_error("--alpha must lie strictly between 0 and 1");
    }
    create_dir(&args.out)?;

    let done = AtomicU64::new(0);
    let step = (config.games / 100).max(1);
    let tick = || {
        let n = done.fetch_add(1, Ordering::Relaxed) + 1;
        if n.is_multiple_of(step) || n == config.games {
            eprint!("\rplayed {n}/{}", config.games);
        }
    };
    let options = RunOptions {
        workers: args.workers,
        progress: (!args.quiet).then_some(&tick as &(dyn Fn() + Sync)),
    };
    let results = run_experiment_with(&config, &options)?;
    if !args.quiet {
        eprintln!();
    }
    for (name, bytes) in render_run(&config, &results, args.moves_bin_width, args.alpha)? {
        write_file(&args.out, name, &bytes)?;
    }
    Ok(())
}

fn analyze(args: AnalyzeArgs) -> Result<()> {
    if !(args.alpha > 0.0 && args.alpha < 1.0) {
        usage_error("--alpha must lie strictly between 0 and 1");
    }
    let file =
        File::open(&args.input).with_context(|| format!("opening {}", args.input.display()))?;
    let (config, results) = read_results(BufReader::new(file))
        .with_context(|| format!("reading {}", args.input.display()))?;
    let json = summarize(&results, &config, args.alpha)?.to_json()?;
    match args.out {
        Some(dir) => {
            create_dir(&dir)?;
            write_file(&dir, SUMMARY_FILE, json.as_bytes())?;
        }
        None => io::stdout().write_all(json.as_bytes())?,
    }
    Ok(())
}

fn replay(args: ReplayArgs) -> Result<()> {
    let mode = args.recombine.into();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let deck = match args.deck {
        Some(Deck(deck)) => {
            writeln!(out, "# replay deck=given")?;
            deck
        }
        None => {
            writeln!(out, "# replay seed={} index={}", args.seed, args.index)?;
            deck_for(args.seed, args.index)
        }
    };
    write_trace(deck, mode, args.verbose, &mut out)?;
    out.flush()?;
    Ok(())
}

fn explore(args: ExploreArgs) -> Result<()> {
    let modes: &[RecombineMode] = match args.mode {
        ModeChoice::Flip => &[RecombineMode::Flip],
        ModeChoice::Noflip => &[RecombineMode::NoFlip],
        ModeChoice::Both => &RecombineMode::ALL,
    };
    let set = match args.set {
        SetChoice::All => PatternSet::All,
        SetChoice::Quads => PatternSet::FullQuads,
    };
    create_dir(&args.out)?;
    let options = AtlasOptions {
        set,
        sample_budget: args.budget,
        seed: args.seed,
        ..AtlasOptions::default()
    };

    let mut atlases = Vec::new();
    let mut searches = Vec::new();
    for &mode in modes {
        let mut found = find_single_round_cycles_in(args.max_length, mode, set)?;
        let mut sampled = Vec::new();
        for &length in &args.sample_length {
            let hits = search_single_round_cycles(length, mode, set, args.samples, args.seed)?;
            for p in hits {
                if !found.contains(&p) {
                    found.push(p);
                }
            }
            sampled.push((length, args.samples));
        }
        searches.push(FixedPointSearch {
            mode,
            set,
            exhaustive_max: args.max_length,
            sampled,
            found,
        });
        for length in (4..=args.max_length).step_by(4) {
            atlases.push(orbit_atlas(length, mode, &options)?);
        }
    }

    let mut atlas_csv = Vec::new();
    write_atlas_csv(&atlases, &mut atlas_csv)?;
    write_file(&args.out, "atlas.csv", &atlas_csv)?;
    let mut fixed = Vec::new();
    write_fixed_points(&searches, &mut fixed)?;
    write_file(&args.out, "fixed_points.txt", &fixed)?;
    for search in &searches {
        eprintln!(
            "{}: {} single-round cycle(s) up to length {}",
            search.mode,
            search.found.len(),
            search.exhaustive_max
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Simulate(args) => simulate(args),
        Command::Analyze(args) => analyze(args),
        Command::Replay(args) => replay(args),
        Command::Explore(args) => explore(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

mod common;

use common::*;
use pmotion_core::engine::{play_game_with, GameObserver, Tableau, PILES};
use pmotion_core::{
    format_values, parse_values, play_game, round_map, CardValue, Error, GameState, Outcome,
    RecombineMode, SeenLedger, TurnEvent,
};
use proptest::prelude::*;

fn deck(text: &str) -> Vec<CardValue> {
    parse_values(text).unwrap()
}

fn load_fixture(name: &str) -> Vec<CardValue> {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(path).unwrap();
    let body: String = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .collect::<Vec<_>>()
        .join(" ");
    parse_values(&body).unwrap()
}

fn turn(state: &mut GameState) -> Vec<TurnEvent> {
    let mut events = Vec::new();
    state.deal_turn(&mut |e| events.push(e));
    events
}

#[test]
fn consolidates_onto_leftmost_duplicate() {
    // A 3 Q 3 dealt onto piles whose fourth already holds a 9.
    let mut state = GameState::new(deck("2 4 6 9 A 3 Q 3"), RecombineMode::Flip).unwrap();
    turn(&mut state);
    let events = turn(&mut state);
    assert_eq!(
        events[1],
        TurnEvent::Consolidated {
            value: "3".parse().unwrap(),
            from: 4,
            to: 2
        }
    );
    let tops: Vec<Option<String>> = (0..PILES)
        .map(|i| state.tableau().top(i).map(|v| v.to_string()))
        .collect();
    assert_eq!(
        tops,
        vec![
            Some("A".into()),
            Some("3".into()),
            Some("Q".into()),
            Some("9".into())
        ]
    );
    assert_eq!(format_values(state.tableau().pile(1)), "4 3 3");
}

#[test]
fn quad_is_discarded() {
    let mut state = GameState::new(deck("7 7 7 7"), RecombineMode::Flip).unwrap();
    let events = turn(&mut state);
    assert!(state.tableau().is_empty());
    assert_eq!(state.discarded(), 4);
    assert_eq!(state.moves(), 8);
    assert_eq!(state.first_discard_round(), Some(1));
    assert!(matches!(
        events.as_slice(),
        [TurnEvent::Dealt { .. }, TurnEvent::Discarded { .. }]
    ));
}

#[test]
fn two_pairs_consolidate() {
    let mut state = GameState::new(deck("5 9 5 9"), RecombineMode::Flip).unwrap();
    turn(&mut state);
    let piles: Vec<String> = (0..PILES)
        .map(|i| format_values(state.tableau().pile(i)))
        .collect();
    assert_eq!(piles, vec!["5 5", "9 9", "", ""]);
    assert_eq!(state.moves(), 6);
    // Same result as the reference simulator after recombining.
    for mode in RecombineMode::ALL {
        let (next, moves, _) = reference_round(&[5, 9, 5, 9], is_flip(mode));
        let (ours, _) = round_map(&deck("5 9 5 9"), mode).unwrap();
        assert_eq!(ranks(&ours), next);
        assert_eq!(moves, 6);
    }
}

#[test]
fn consolidation_never_triggers_a_discard() {
    // Pile 1 ends up holding four 7s, but only the dealt four are examined.
    let mut state = GameState::new(deck("7 7 7 K 7 2 3 2"), RecombineMode::Flip).unwrap();
    turn(&mut state);
    assert_eq!(format_values(state.tableau().pile(0)), "7 7 7");
    let events = turn(&mut state);
    assert_eq!(state.discarded(), 0);
    assert_eq!(events.len(), 2);
    assert_eq!(format_values(state.tableau().pile(1)), "2 2");
}

#[test]
fn recombine_orientations() {
    let single = |v: &str| vec![v.parse::<CardValue>().unwrap()];
    let piles = [single("A"), single("2"), single("3"), single("4")];
    let mut t = Tableau::from_piles(piles.clone());
    assert_eq!(
        format_values(&t.recombine(RecombineMode::NoFlip)),
        "A 2 3 4"
    );
    assert!(t.is_empty());
    let mut t = Tableau::from_piles(piles);
    assert_eq!(format_values(&t.recombine(RecombineMode::Flip)), "4 3 2 A");

    // p1 = K on Q, p3 = 2. Piles are stored bottom first.
    let mut t = Tableau::from_piles([deck("Q K"), vec![], deck("2"), vec![]]);
    assert_eq!(format_values(&t.recombine(RecombineMode::NoFlip)), "K Q 2");
    let mut t = Tableau::from_piles([deck("Q K"), vec![], deck("2"), vec![]]);
    assert_eq!(format_values(&t.recombine(RecombineMode::Flip)), "2 Q K");

    let mut empty = Tableau::default();
    assert!(empty.recombine(RecombineMode::Flip).is_empty());
}

#[test]
fn minimal_completable_deck() {
    for mode in RecombineMode::ALL {
        let result = play_game(deck("8 8 8 8"), mode).unwrap();
        assert_eq!(result.outcome, Outcome::Completed);
        assert_eq!(result.rounds, 1);
        assert_eq!(result.moves, 8);
        assert_eq!(result.first_discard_round, Some(1));
        assert_eq!(result.cycle, None);
    }
}

#[test]
fn alternating_pairs_deck() {
    // Round 1 gathers A A A A and 2 2 2 2 onto piles 1 and 2; round 2
    // discards both quads.
    let d = deck("A 2 A 2 A 2 A 2");
    let (flip, _) = round_map(&d, RecombineMode::Flip).unwrap();
    assert_eq!(format_values(&flip), "2 2 2 2 A A A A");
    let (noflip, _) = round_map(&d, RecombineMode::NoFlip).unwrap();
    assert_eq!(format_values(&noflip), "A A A A 2 2 2 2");
    for mode in RecombineMode::ALL {
        let ours = play_game(d.clone(), mode).unwrap();
        let oracle = reference_game(&ranks(&d), is_flip(mode));
        assert!(matches_reference(&ours, &oracle), "{ours:?} vs {oracle:?}");
        assert_eq!(ours.outcome, Outcome::Completed);
        assert_eq!(ours.rounds, 2);
        assert_eq!(ours.moves, 28);
        assert_eq!(ours.first_discard_round, Some(2));
    }
}

#[test]
fn two_value_deck_cycles() {
    let d = deck("A A 2 2 2 2 A A");
    let (next, discarded) = round_map(&d, RecombineMode::Flip).unwrap();
    assert_eq!(format_values(&next), "2 2 A A A A 2 2");
    assert_eq!(discarded, 0);
    let result = play_game(d.clone(), RecombineMode::Flip).unwrap();
    assert_eq!(result.outcome, Outcome::Cycled);
    assert_eq!(result.rounds, 2);
    assert_eq!(result.moves, 24);
    assert_eq!(result.first_discard_round, None);
    let cycle = result.cycle.unwrap();
    assert_eq!((cycle.first_seen_round, cycle.cycle_length), (0, 2));
    assert!(matches_reference(
        &result,
        &reference_game(&ranks(&d), true)
    ));
}

#[test]
fn frozen_full_deck_results() {
    let cases = [
        (
            "deck52_completes.txt",
            RecombineMode::Flip,
            Outcome::Completed,
            92,
            4507,
            Some(15),
            None,
        ),
        (
            "deck52_completes.txt",
            RecombineMode::NoFlip,
            Outcome::Completed,
            193,
            9796,
            Some(72),
            None,
        ),
        (
            "deck52_cycles.txt",
            RecombineMode::Flip,
            Outcome::Cycled,
            120,
            5764,
            Some(46),
            Some((118, 2)),
        ),
        (
            "deck52_cycles.txt",
            RecombineMode::NoFlip,
            Outcome::Completed,
            161,
            7618,
            Some(21),
            None,
        ),
    ];
    for (file, mode, outcome, rounds, moves, first_discard, cycle) in cases {
        let d = load_fixture(file);
        assert_eq!(d.len(), 52);
        let result = play_game(d.clone(), mode).unwrap();
        assert_eq!(result.outcome, outcome, "{file} {mode}");
        assert_eq!(result.rounds, rounds, "{file} {mode}");
        assert_eq!(result.moves, moves, "{file} {mode}");
        assert_eq!(result.first_discard_round, first_discard, "{file} {mode}");
        assert_eq!(
            result.cycle.map(|c| (c.first_seen_round, c.cycle_length)),
            cycle,
            "{file} {mode}"
        );
        assert!(matches_reference(
            &result,
            &reference_game(&ranks(&d), is_flip(mode))
        ));
    }
}

#[test]
fn rejects_illegal_decks() {
    assert!(matches!(
        play_game(deck("A 2 3"), RecombineMode::Flip),
        Err(Error::DeckLength(3))
    ));
    assert!(matches!(
        play_game(deck("A A A A A 2 2 2"), RecombineMode::Flip),
        Err(Error::TooManyCopies(_))
    ));
    assert!(matches!(
        play_game(vec![], RecombineMode::Flip),
        Err(Error::EmptyDeck)
    ));
}

#[test]
#[should_panic(expected = "completed game")]
fn round_on_completed_game_panics() {
    let mut state = GameState::new(deck("8 8 8 8"), RecombineMode::Flip).unwrap();
    state.play_round(&mut |_| {});
    assert!(state.is_complete());
    state.play_round(&mut |_| {});
}

#[test]
fn engine_matches_reference_on_random_decks() {
    let mut rng = test_rng(11);
    for i in 0..600 {
        let d = random_deck(&mut rng, i % 2 == 0);
        for mode in RecombineMode::ALL {
            let ours = play_game(values(&d), mode).unwrap();
            let oracle = reference_game(&d, is_flip(mode));
            assert!(
                matches_reference(&ours, &oracle),
                "deck {d:?} {mode}: {ours:?} vs {oracle:?}"
            );
        }
    }
}

/// Checks conservation and the event contract after every turn.
struct Auditor {
    size: usize,
    discards_seen: usize,
    last_hand_len: Option<usize>,
}

impl GameObserver for Auditor {
    fn turn(&mut self, _round: u32, event: &TurnEvent, state: &GameState) {
        assert_eq!(
            state.hand().len() + state.tableau().len() + state.discarded(),
            self.size
        );
        assert_eq!(state.discarded() % 4, 0);
        if let TurnEvent::Discarded { cards } = event {
            assert!(cards.iter().all(|&c| c == cards[0]));
            self.discards_seen += 4;
        }
    }

    fn round_end(&mut self, _round: u32, hand: &[CardValue]) {
        assert_eq!(hand.len() % 4, 0);
        if let Some(prev) = self.last_hand_len {
            assert!(hand.len() <= prev);
        }
        self.last_hand_len = Some(hand.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn conservation_and_quads(seed in any::<u64>(), full in any::<bool>(), flip in any::<bool>()) {
        let d = random_deck(&mut test_rng(seed), full);
        let mode = if flip { RecombineMode::Flip } else { RecombineMode::NoFlip };
        let mut auditor = Auditor { size: d.len(), discards_seen: 0, last_hand_len: None };
        let result = play_game_with(values(&d), mode, &mut SeenLedger::new(), &mut auditor).unwrap();
        if result.outcome == Outcome::Completed {
            prop_assert_eq!(auditor.discards_seen, d.len());
            prop_assert!(result.first_discard_round.is_some());
        }
        prop_assert!(result.rounds >= 1);
    }

    #[test]
    fn relabelling_commutes_with_a_round(
        seed in any::<u64>(),
        perm in Just((1..=13u8).collect::<Vec<_>>()).prop_shuffle(),
        flip in any::<bool>(),
    ) {
        let d = random_prefix(&mut test_rng(seed));
        let mode = if flip { RecombineMode::Flip } else { RecombineMode::NoFlip };
        let relabel = |xs: &[u8]| xs.iter().map(|&r| perm[usize::from(r - 1)]).collect::<Vec<_>>();
        let (next, discards) = round_map(&values(&d), mode).unwrap();
        let (next_relabelled, discards_relabelled) = round_map(&values(&relabel(&d)), mode).unwrap();
        prop_assert_eq!(ranks(&next_relabelled), relabel(&ranks(&next)));
        prop_assert_eq!(discards, discards_relabelled);
        let full = random_deck(&mut test_rng(seed), false);
        let a = play_game(values(&full), mode).unwrap();
        let b = play_game(values(&relabel(&full)), mode).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn rounds_are_deterministic(seed in any::<u64>(), flip in any::<bool>()) {
        let d = values(&random_deck(&mut test_rng(seed), true));
        let mode = if flip { RecombineMode::Flip } else { RecombineMode::NoFlip };
        let trace = |d: &[CardValue]| {
            let mut state = GameState::new(d.to_vec(), mode).unwrap();
            let mut events = Vec::new();
            state.play_round(&mut |e| events.push(e));
            (state.hand().to_vec(), events)
        };
        prop_assert_eq!(trace(&d), trace(&d));
    }
}

//! A deliberately plain re-implementation of the rules, used only as an
//! oracle. It shares no code with the engine: cards are bare `u8` ranks,
//! piles are stored top-first, and repeats are found by linear search over
//! every hand seen so far.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefResult {
    pub completed: bool,
    pub rounds: u32,
    pub moves: u64,
    pub first_discard_round: Option<u32>,
    pub cycle_length: Option<u32>,
    pub first_seen_round: Option<u32>,
}

/// Plays one round. Returns the next hand (dealt-first order), the number of
/// cards moved and the number discarded.
pub fn reference_round(hand: &[u8], flip: bool) -> (Vec<u8>, u64, usize) {
    // piles[i][0] is the top card of pile i
    let mut piles: Vec<Vec<u8>> = vec![Vec::new(), Vec::new(), Vec::new(), Vec::new()];
    let mut deck: Vec<u8> = hand.to_vec();
    let mut moves = 0u64;
    let mut discarded = 0usize;

    // Step 4: repeat steps 1-3 until the pack is used up.
    while !deck.is_empty() {
        // Step 1: four cards, left to right.
        let mut dealt = Vec::new();
        for pile in piles.iter_mut() {
            let card = deck.remove(0);
            pile.insert(0, card);
            dealt.push(card);
            moves += 1;
        }
        // Step 2: all four the same value.
        if dealt[0] == dealt[1] && dealt[1] == dealt[2] && dealt[2] == dealt[3] {
            for pile in piles.iter_mut() {
                pile.remove(0);
                moves += 1;
            }
            discarded += 4;
            continue;
        }
        // Step 3: duplicates go onto the left-most card of the same value.
        let mut handled_values: Vec<u8> = Vec::new();
        for left in 0..4 {
            let value = dealt[left];
            if handled_values.contains(&value) {
                continue;
            }
            handled_values.push(value);
            for right in (left + 1)..4 {
                if dealt[right] == value {
                    let card = piles[right].remove(0);
                    assert_eq!(card, value);
                    piles[left].insert(0, card);
                    moves += 1;
                }
            }
        }
    }

    // Step 5: pile 1 on pile 2 on pile 3 on pile 4; index 0 is the top.
    let mut stack: Vec<u8> = Vec::new();
    for pile in &piles {
        stack.extend(pile.iter().copied());
    }
    if flip {
        stack.reverse();
    }
    (stack, moves, discarded)
}

/// Plays a whole game, stopping at the first repeated end-of-round hand (the
/// shuffled pack counts as round 0).
pub fn reference_game(deck: &[u8], flip: bool) -> RefResult {
    let mut history: Vec<Vec<u8>> = vec![deck.to_vec()];
    let mut hand = deck.to_vec();
    let mut rounds = 0u32;
    let mut moves = 0u64;
    let mut first_discard_round = None;
    loop {
        rounds += 1;
        let (next, round_moves, discarded) = reference_round(&hand, flip);
        moves += round_moves;
        if discarded > 0 && first_discard_round.is_none() {
            first_discard_round = Some(rounds);
        }
        if next.is_empty() {
            return RefResult {
                completed: true,
                rounds,
                moves,
                first_discard_round,
                cycle_length: None,
                first_seen_round: None,
            };
        }
        for (seen_round, old) in history.iter().enumerate() {
            if *old == next {
                return RefResult {
                    completed: false,
                    rounds,
                    moves,
                    first_discard_round,
                    cycle_length: Some(rounds - seen_round as u32),
                    first_seen_round: Some(seen_round as u32),
                };
            }
        }
        history.push(next.clone());
        hand = next;
    }
}

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Number of distinct card values in a pack.
pub const RANKS: u8 = 13;
/// Copies of each value in a standard pack.
pub const SUITS: usize = 4;
/// Size of a standard pack.
pub const PACK_SIZE: usize = RANKS as usize * SUITS;

const TOKENS: [char; RANKS as usize] = [
    'A', '2', '3', '4', '5', '6', '7', '8', '9', 'T', 'J', 'Q', 'K',
];

/// The value of a card, Ace = 1 through King = 13. Suits are not modelled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct CardValue(u8);

impl CardValue {
    pub const ACE: CardValue = CardValue(1);
    pub const KING: CardValue = CardValue(13);

    pub fn new(rank: u8) -> Result<Self, Error> {
        if (1..=RANKS).contains(&rank) {
            Ok(CardValue(rank))
        } else {
            Err(Error::InvalidRank(rank))
        }
    }

    pub fn rank(self) -> u8 {
        self.0
    }

    /// Zero-based index, handy for per-rank tables.
    pub fn index(self) -> usize {
        usize::from(self.0 - 1)
    }

    pub fn from_index(index: usize) -> Result<Self, Error> {
        u8::try_from(index + 1)
            .map_err(|_| Error::InvalidRank(u8::MAX))
            .and_then(CardValue::new)
    }

    pub fn token(self) -> char {
        TOKENS[self.index()]
    }

    pub fn all() -> impl Iterator<Item = CardValue> + Clone {
        (1..=RANKS).map(CardValue)
    }
}

impl TryFrom<u8> for CardValue {
    type Error = Error;

    fn try_from(rank: u8) -> Result<Self, Error> {
        CardValue::new(rank)
    }
}

impl From<CardValue> for u8 {
    fn from(value: CardValue) -> u8 {
        value.0
    }
}

impl fmt::Display for CardValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.token())
    }
}

impl FromStr for CardValue {
    type Err = Error;

    /// Accepts the single-character tokens `A 2 … 9 T J Q K` (case-insensitive)
    /// as well as `10`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let upper = s.trim().to_ascii_uppercase();
        if upper == "10" {
            return Ok(CardValue(10));
        }
        let mut chars = upper.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => TOKENS
                .iter()
                .position(|&t| t == c)
                .map(|i| CardValue(i as u8 + 1))
                .ok_or_else(|| Error::InvalidToken(s.to_string())),
            _ => Err(Error::InvalidToken(s.to_string())),
        }
    }
}

/// Parses a whitespace-separated list of rank tokens.
pub fn parse_values(text: &str) -> Result<Vec<CardValue>, Error> {
    text.split_whitespace().map(str::parse).collect()
}

/// Renders values as space-separated rank tokens.
pub fn format_values(values: &[CardValue]) -> String {
    let mut out = String::with_capacity(values.len() * 2);
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push(v.token());
    }
    out
}

/// The 52 values of a standard pack, in rank order.
pub fn standard_pack() -> Vec<CardValue> {
    CardValue::all()
        .flat_map(|v| std::iter::repeat_n(v, SUITS))
        .collect()
}

/// Checks that `values` is a legal deck: length a multiple of four and no
/// value appearing more than four times.
pub fn validate_deck(values: &[CardValue]) -> Result<(), Error> {
    if !values.len().is_multiple_of(4) {
        return Err(Error::DeckLength(values.len()));
    }
    let mut counts = [0usize; RANKS as usize];
    for v in values {
        counts[v.index()] += 1;
        if counts[v.index()] > SUITS {
            return Err(Error::TooManyCopies(*v));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_round_trip() {
        for v in CardValue::all() {
            assert_eq!(v.to_string().parse::<CardValue>().unwrap(), v);
        }
        assert_eq!("10".parse::<CardValue>().unwrap().rank(), 10);
        assert_eq!("q".parse::<CardValue>().unwrap().rank(), 12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(CardValue::new(0).is_err());
        assert!(CardValue::new(14).is_err());
        assert!("X".parse::<CardValue>().is_err());
        assert!("AA".parse::<CardValue>().is_err());
    }

    #[test]
    fn deck_validation() {
        assert!(validate_deck(&standard_pack()).is_ok());
        assert!(validate_deck(&parse_values("A 2 3").unwrap()).is_err());
        let five = parse_values("7 7 7 7 7 2 3 4").unwrap();
        assert!(matches!(validate_deck(&five), Err(Error::TooManyCopies(_))));
        assert!(validate_deck(&[]).is_ok());
    }

    #[test]
    fn formats_tokens() {
        let deck = parse_values("A T k 9").unwrap();
        assert_eq!(format_values(&deck), "A T K 9");
    }
}

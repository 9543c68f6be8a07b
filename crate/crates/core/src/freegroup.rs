//! Reduced words in the free group `F_n`.
//!
//! A word is a sequence of letters with no adjacent `x x⁻¹` pair. The
//! spelling convention is one character per letter: lowercase for a
//! generator, uppercase for its inverse (`a, b, A, B` at rank 2). The
//! empty string is the identity.

use std::fmt;

use thiserror::Error;

/// A single letter: a generator of `F_n` or the inverse of one.
///
/// Encoded as `2 * generator_index + (1 if inverse)`, so the alphabet
/// of `F_n` is the contiguous range `0..2n`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub(crate) u8);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Letter {
        assert!(generator < 128, "generator index out of range");
        Letter((generator as u8) << 1 | u8::from(inverse))
    }

    /// Index of this letter in the `2n`-letter alphabet.
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(index: usize) -> Letter {
        assert!(index < 256, "alphabet index out of range");
        Letter(index as u8)
    }

    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    /// Whether `self` followed by `other` cancels.
    pub fn cancels(self, other: Letter) -> bool {
        self.0 ^ 1 == other.0
    }

    fn to_char(self) -> char {
        let base = if self.is_inverse() { b'A' } else { b'a' };
        (base + self.generator() as u8) as char
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseWordError {
    #[error("character {0:?} is not a letter")]
    NotALetter(char),
    #[error("letter {0:?} needs rank > {1}")]
    RankTooSmall(char, usize),
}

/// A reduced word; the empty word is the group identity.
///
/// Words are immutable after construction and always reduced: the
/// constructors cancel adjacent inverse pairs.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    /// The identity element.
    pub fn identity() -> Word {
        Word::default()
    }

    /// Builds a word from letters, cancelling adjacent inverse pairs.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last().is_some_and(|last| last.cancels(l)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    pub fn single(letter: Letter) -> Word {
        Word { letters: vec![letter] }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    /// Group product with cancellation; the result is reduced.
    pub fn multiply(&self, other: &Word) -> Word {
        let mut out = self.letters.clone();
        for &l in &other.letters {
            if out.last().is_some_and(|last| last.cancels(l)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// The prefix of length `n` (which is again reduced).
    pub fn prefix(&self, n: usize) -> Word {
        Word { letters: self.letters[..n].to_vec() }
    }

    /// Drops the first `n` letters.
    pub fn suffix_from(&self, n: usize) -> Word {
        Word { letters: self.letters[n..].to_vec() }
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.letters.len() >= self.letters.len()
            && other.letters[..self.letters.len()] == self.letters[..]
    }

    /// Appends one letter; panics if it would cancel (use `multiply`
    /// when cancellation is intended).
    pub fn push_reduced(&self, letter: Letter) -> Word {
        assert!(
            !self.letters.last().is_some_and(|last| last.cancels(letter)),
            "push_reduced would cancel"
        );
        let mut letters = self.letters.clone();
        letters.push(letter);
        Word { letters }
    }

    /// Parses the one-character-per-letter spelling, reducing the
    /// result. The empty string parses to the identity.
    pub fn parse(text: &str, rank: usize) -> Result<Word, ParseWordError> {
        let mut letters = Vec::with_capacity(text.len());
        for c in text.chars() {
            let (base, inverse) = if c.is_ascii_lowercase() {
                (c as u8 - b'a', false)
            } else if c.is_ascii_uppercase() {
                (c as u8 - b'A', true)
            } else {
                return Err(ParseWordError::NotALetter(c));
            };
            if base as usize >= rank {
                return Err(ParseWordError::RankTooSmall(c, base as usize));
            }
            letters.push(Letter::new(base as usize, inverse));
        }
        Ok(Word::from_letters(letters))
    }

    /// Shortlex comparison: by length first, then letter order.
    pub fn shortlex_cmp(&self, other: &Word) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.shortlex_cmp(other)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            write!(f, "\"\"")
        } else {
            write!(f, "\"{self}\"")
        }
    }
}

/// The ambient free group: carries the rank and enumeration helpers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreeGroup {
    rank: usize,
}

impl FreeGroup {
    pub fn new(rank: usize) -> FreeGroup {
        assert!(rank >= 1 && rank <= 26, "rank must be in 1..=26");
        FreeGroup { rank }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of letters in the alphabet (`2n`).
    pub fn alphabet_size(&self) -> usize {
        2 * self.rank
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.alphabet_size()).map(Letter::from_index)
    }

    pub fn generator(&self, index: usize) -> Letter {
        assert!(index < self.rank);
        Letter::new(index, false)
    }

    pub fn parse(&self, text: &str) -> Result<Word, ParseWordError> {
        Word::parse(text, self.rank)
    }

    /// All reduced words of length exactly `k`, in shortlex order.
    pub fn sphere(&self, k: usize) -> Vec<Word> {
        let mut out = vec![Word::identity()];
        for _ in 0..k {
            let mut next = Vec::with_capacity(out.len() * self.alphabet_size());
            for w in &out {
                for l in self.letters() {
                    if !w.last().is_some_and(|last| last.cancels(l)) {
                        next.push(w.push_reduced(l));
                    }
                }
            }
            out = next;
        }
        out
    }

    /// All reduced words of length at most `k`, in shortlex order.
    pub fn ball(&self, k: usize) -> Vec<Word> {
        (0..=k).flat_map(|j| self.sphere(j)).collect()
    }
}

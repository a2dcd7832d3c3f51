//! Binary words, the `couple` pairing function and the length-lex
//! bijection between words and natural numbers.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::Nat;

/// A finite binary string. The empty word is allowed.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    bits: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WordError {
    #[error("invalid character {0:?} in word (expected '0' or '1')")]
    BadChar(char),
    #[error("malformed coupled word: {0}")]
    MalformedWord(&'static str),
}

impl Word {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.clone();
        out.extend_from(other);
        out
    }

    /// Sub-word `[start, end)`. Panics on out-of-range bounds like slice indexing.
    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word::from_bits(self.bits[start..end].to_vec())
    }

    /// Big-endian value of `width` bits starting at `start`, if available.
    pub fn read_uint(&self, start: usize, width: usize) -> Option<u64> {
        if start + width > self.bits.len() {
            return None;
        }
        Some(
            self.bits[start..start + width]
                .iter()
                .fold(0u64, |acc, &b| (acc << 1) | u64::from(b)),
        )
    }

    pub fn push_uint(&mut self, value: u64, width: usize) {
        for i in (0..width).rev() {
            self.bits.push((value >> i) & 1 == 1);
        }
    }

    pub fn starts_with(&self, prefix: &Word) -> bool {
        self.bits.starts_with(&prefix.bits)
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(WordError::BadChar(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word::from_bits)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits.is_empty() {
            f.write_str("ε")
        } else {
            write!(f, "\"{self}\"")
        }
    }
}

/// Length-lex order: shorter words first, then lexicographic with `0 < 1`.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bits
            .len()
            .cmp(&other.bits.len())
            .then_with(|| self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Header/payload split of a coupled word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pair {
    pub header: Word,
    pub payload: Word,
}

/// `⟨e₁…eₙ, p⟩ = 0e₁0e₂…0eₙ1p`, of length `|p| + 2|e| + 1`.
pub fn couple_encode(header: &Word, payload: &Word) -> Word {
    let mut bits = Vec::with_capacity(payload.len() + 2 * header.len() + 1);
    for &b in header.bits() {
        bits.push(false);
        bits.push(b);
    }
    bits.push(true);
    bits.extend_from_slice(payload.bits());
    Word::from_bits(bits)
}

pub fn couple_decode(word: &Word) -> Result<Pair, WordError> {
    let bits = word.bits();
    if bits.is_empty() {
        return Err(WordError::MalformedWord("empty word"));
    }
    let mut header = Vec::new();
    let mut i = 0;
    loop {
        match bits.get(i) {
            None => return Err(WordError::MalformedWord("no terminating 1")),
            Some(true) => break,
            Some(false) => match bits.get(i + 1) {
                Some(&b) => {
                    header.push(b);
                    i += 2;
                }
                None => return Err(WordError::MalformedWord("dangling escape bit")),
            },
        }
    }
    Ok(Pair {
        header: Word::from_bits(header),
        payload: Word::from_bits(bits[i + 1..].to_vec()),
    })
}

/// Length-lex rank: ε→0, "0"→1, "1"→2, "00"→3, …  (bijective base 2).
pub fn word_to_nat(word: &Word) -> Nat {
    let mut n = BigUint::zero();
    for &b in word.bits() {
        n <<= 1u32;
        n += if b { 2u32 } else { 1u32 };
    }
    n
}

pub fn nat_to_word(n: &Nat) -> Word {
    // n + 1 written in binary is "1" followed by the word.
    let m = n + BigUint::one();
    let width = m.bits() as usize - 1;
    let mut bits = Vec::with_capacity(width);
    for i in (0..width).rev() {
        bits.push(m.bit(i as u64));
    }
    Word::from_bits(bits)
}

/// All words of exactly `len` bits in lexicographic order.
pub fn words_of_len(len: usize) -> impl Iterator<Item = Word> {
    assert!(len < 64, "word length {len} too large to enumerate");
    (0u64..(1u64 << len)).map(move |v| {
        let mut w = Word::new();
        w.push_uint(v, len);
        w
    })
}

/// All words of length `<= max_len` in length-lex order.
pub fn words_up_to(max_len: usize) -> impl Iterator<Item = Word> {
    (0..=max_len).flat_map(words_of_len)
}
